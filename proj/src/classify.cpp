#include "ibts/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "ibts/parallel.hpp"
#include "ibts/rng.hpp"

namespace ibts {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::size_t> draw_bootstrap(std::mt19937_64& rng,
                                        std::size_t row_count) {
  std::vector<std::size_t> rows(row_count);
  for (auto& r : rows) {
    r = static_cast<std::size_t>(rng_below(rng, row_count));
  }
  return rows;
}

double gini(const std::vector<std::uint32_t>& counts, std::uint32_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (std::uint32_t c : counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct TreeBuilder {
  const EncodedMatrix& data;
  const std::vector<std::uint32_t>& y;
  std::size_t class_count;
  int mtry;
  int max_depth;
  int min_leaf;
  std::mt19937_64& rng;
  ForestModel::Tree tree;

  // Scratch reused across nodes.
  std::vector<std::size_t> feature_pool;
  std::vector<std::pair<double, std::uint32_t>> sorted_cells;

  std::int32_t build(std::vector<std::size_t>& rows, int depth) {
    std::vector<std::uint32_t> counts(class_count, 0);
    for (std::size_t r : rows) ++counts[y[r]];
    const auto total = static_cast<std::uint32_t>(rows.size());

    std::uint32_t classes_present = 0;
    for (std::uint32_t c : counts) classes_present += c > 0 ? 1 : 0;

    const bool stop = classes_present <= 1 ||
                      rows.size() < 2 * static_cast<std::size_t>(min_leaf) ||
                      (max_depth > 0 && depth >= max_depth);
    if (!stop) {
      const double parent_gini = gini(counts, total);
      double best_gain = 0.0;
      std::int32_t best_feature = -1;
      double best_threshold = 0.0;

      // mtry distinct features, evaluated in ascending index order so that
      // equal gains resolve to the lowest feature index.
      const std::size_t p = data.col_count;
      if (feature_pool.size() != p) {
        feature_pool.resize(p);
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
      }
      for (int i = 0; i < mtry; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng_below(rng, p - i));
        std::swap(feature_pool[i], feature_pool[j]);
      }
      std::vector<std::size_t> candidates(feature_pool.begin(),
                                          feature_pool.begin() + mtry);
      std::sort(candidates.begin(), candidates.end());

      for (std::size_t f : candidates) {
        sorted_cells.clear();
        for (std::size_t r : rows) {
          sorted_cells.emplace_back(data.at(r, f), y[r]);
        }
        std::sort(sorted_cells.begin(), sorted_cells.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<std::uint32_t> left_counts(class_count, 0);
        std::uint32_t left_total = 0;
        for (std::size_t i = 0; i + 1 < sorted_cells.size(); ++i) {
          ++left_counts[sorted_cells[i].second];
          ++left_total;
          if (sorted_cells[i].first == sorted_cells[i + 1].first) continue;
          const std::uint32_t right_total = total - left_total;
          if (left_total < static_cast<std::uint32_t>(min_leaf) ||
              right_total < static_cast<std::uint32_t>(min_leaf))
            continue;
          std::vector<std::uint32_t> right_counts(class_count, 0);
          for (std::size_t c = 0; c < class_count; ++c) {
            right_counts[c] = counts[c] - left_counts[c];
          }
          const double child =
              (left_total * gini(left_counts, left_total) +
               right_total * gini(right_counts, right_total)) /
              total;
          const double gain = parent_gini - child;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = static_cast<std::int32_t>(f);
            best_threshold =
                sorted_cells[i].first +
                (sorted_cells[i + 1].first - sorted_cells[i].first) / 2.0;
          }
        }
      }

      if (best_feature >= 0) {
        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
          (data.at(r, static_cast<std::size_t>(best_feature)) < best_threshold
               ? left_rows
               : right_rows)
              .push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const auto id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[id].feature = best_feature;
        tree.nodes[id].threshold = best_threshold;
        const std::int32_t left = build(left_rows, depth + 1);
        const std::int32_t right = build(right_rows, depth + 1);
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
      }
    }

    const auto id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[id].votes = std::move(counts);
    return id;
  }
};

std::uint32_t argmax_votes(const std::vector<std::uint32_t>& votes) {
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[best]) best = c;  // ties keep the smaller index
  }
  return best;
}

std::int32_t walk_tree(const ForestModel::Tree& tree,
                       const std::vector<double>& x) {
  std::int32_t node = 0;
  while (tree.nodes[node].feature >= 0) {
    const auto& n = tree.nodes[node];
    node = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                : n.right;
  }
  return node;
}

}  // namespace

void ForestParams::validate() const {
  if (tree_count < 1) throw ParamError("tree_count must be >= 1");
  if (max_depth < 0) throw ParamError("max_depth must be >= 0 (0 = unlimited)");
  if (min_leaf < 1) throw ParamError("min_leaf must be >= 1");
  if (candidate_features < 0) {
    throw ParamError("candidate_features must be >= 0 (0 = sqrt default)");
  }
}

EncodedMatrix one_hot_encode(const FeatureMatrix& m) {
  m.validate();
  EncodedMatrix em;
  em.row_count = m.row_count();

  for (std::size_t c = 0; c < m.column_count(); ++c) {
    EncodedMatrix::ColumnEncoding enc;
    enc.source_name = m.feature_names[c];
    enc.kind = m.column_kinds[c];
    enc.first_encoded = em.col_count;
    if (enc.kind == ColumnKind::numeric) {
      em.column_names.push_back(enc.source_name);
      ++em.col_count;
    } else {
      std::set<Relation> present;
      for (const auto& row : m.rows) {
        present.insert(std::get<Relation>(row.values[c]));
      }
      // Indicators in declaration order of the Relation enum.
      for (Relation r : kAllRelations) {
        if (!present.count(r)) continue;
        enc.tokens.push_back(r);
        em.column_names.push_back(enc.source_name + "=" +
                                  std::string(relation_token(r)));
        ++em.col_count;
      }
    }
    em.encodings.push_back(std::move(enc));
  }

  em.values.assign(em.row_count * em.col_count, 0.0);
  for (std::size_t r = 0; r < em.row_count; ++r) {
    const auto& row = m.rows[r];
    em.row_ids.push_back(row.id);
    em.row_classes.push_back(row.class_label);
    double* out = em.values.data() + r * em.col_count;
    for (const auto& enc : em.encodings) {
      const std::size_t c = &enc - em.encodings.data();
      if (enc.kind == ColumnKind::numeric) {
        out[enc.first_encoded] = std::get<double>(row.values[c]);
      } else {
        const Relation v = std::get<Relation>(row.values[c]);
        for (std::size_t t = 0; t < enc.tokens.size(); ++t) {
          if (enc.tokens[t] == v) {
            out[enc.first_encoded + t] = 1.0;
            break;
          }
        }
      }
    }
  }
  return em;
}

FeatureMatrix decode(const EncodedMatrix& em) {
  FeatureMatrix m;
  for (const auto& enc : em.encodings) {
    m.feature_names.push_back(enc.source_name);
    m.column_kinds.push_back(enc.kind);
  }
  for (std::size_t r = 0; r < em.row_count; ++r) {
    FeatureMatrix::Row row;
    row.id = em.row_ids[r];
    row.class_label = em.row_classes[r];
    for (const auto& enc : em.encodings) {
      if (enc.kind == ColumnKind::numeric) {
        row.values.emplace_back(em.at(r, enc.first_encoded));
      } else {
        Relation v = Relation::none;
        for (std::size_t t = 0; t < enc.tokens.size(); ++t) {
          if (em.at(r, enc.first_encoded + t) != 0.0) {
            v = enc.tokens[t];
            break;
          }
        }
        row.values.emplace_back(v);
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

std::vector<double> encode_row(
    const std::vector<EncodedMatrix::ColumnEncoding>& encodings,
    std::size_t encoded_width, const std::vector<Cell>& row) {
  if (row.size() != encodings.size()) {
    throw ConsistencyError("row has " + std::to_string(row.size()) +
                           " cells, schema expects " +
                           std::to_string(encodings.size()));
  }
  std::vector<double> out(encoded_width, 0.0);
  for (std::size_t c = 0; c < encodings.size(); ++c) {
    const auto& enc = encodings[c];
    if (enc.kind == ColumnKind::numeric) {
      if (!std::holds_alternative<double>(row[c])) {
        throw ConsistencyError("cell " + std::to_string(c) +
                               " is not numeric as the schema requires");
      }
      out[enc.first_encoded] = std::get<double>(row[c]);
    } else {
      if (!std::holds_alternative<Relation>(row[c])) {
        throw ConsistencyError("cell " + std::to_string(c) +
                               " is not a relation as the schema requires");
      }
      const Relation v = std::get<Relation>(row[c]);
      for (std::size_t t = 0; t < enc.tokens.size(); ++t) {
        if (enc.tokens[t] == v) {
          out[enc.first_encoded + t] = 1.0;
          break;
        }
      }
      // Unseen tokens leave every indicator at zero.
    }
  }
  return out;
}

std::vector<std::size_t> bootstrap_indices(std::uint64_t seed,
                                           std::uint64_t tree_index,
                                           std::size_t row_count) {
  auto rng = substream_rng(seed, tree_index);
  return draw_bootstrap(rng, row_count);
}

ForestModel fit_forest(const FeatureMatrix& m, const ForestParams& p,
                       int workers) {
  p.validate();
  EncodedMatrix em = one_hot_encode(m);
  if (em.col_count == 0) {
    throw ValidationError("cannot train on a matrix with no feature columns");
  }

  std::set<std::string> class_set(em.row_classes.begin(),
                                  em.row_classes.end());
  if (class_set.size() < 2) {
    throw ValidationError("training requires at least 2 classes, got " +
                          std::to_string(class_set.size()));
  }

  ForestModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.feature_names = m.feature_names;
  model.column_kinds = m.column_kinds;
  model.encodings = em.encodings;
  model.encoded_width = em.col_count;
  model.params = p;

  std::unordered_map<std::string, std::uint32_t> class_index;
  for (std::uint32_t i = 0; i < model.classes.size(); ++i) {
    class_index.emplace(model.classes[i], i);
  }
  std::vector<std::uint32_t> y(em.row_count);
  for (std::size_t r = 0; r < em.row_count; ++r) {
    y[r] = class_index.at(em.row_classes[r]);
  }

  int mtry = p.candidate_features;
  if (mtry == 0) {
    mtry = static_cast<int>(std::sqrt(static_cast<double>(em.col_count)));
  }
  mtry = std::clamp(mtry, 1, static_cast<int>(em.col_count));

  model.trees.resize(static_cast<std::size_t>(p.tree_count));
  parallel_for(model.trees.size(), workers, [&](std::size_t t) {
    auto rng = substream_rng(p.seed, t);
    std::vector<std::size_t> rows = draw_bootstrap(rng, em.row_count);
    TreeBuilder builder{em,   y,           model.classes.size(), mtry,
                        p.max_depth, p.min_leaf,  rng};
    builder.build(rows, 0);
    model.trees[t] = std::move(builder.tree);
  });
  return model;
}

Prediction predict(const ForestModel& model, const std::vector<Cell>& row) {
  for (std::size_t c = 0; c < model.column_kinds.size(); ++c) {
    const bool numeric = model.column_kinds[c] == ColumnKind::numeric;
    if (c < row.size() &&
        numeric != std::holds_alternative<double>(row[c])) {
      throw ConsistencyError("prediction row does not match the model schema");
    }
  }
  const std::vector<double> x =
      encode_row(model.encodings, model.encoded_width, row);

  std::vector<std::uint32_t> votes(model.classes.size(), 0);
  for (const auto& tree : model.trees) {
    const std::int32_t leaf = walk_tree(tree, x);
    ++votes[argmax_votes(tree.nodes[static_cast<std::size_t>(leaf)].votes)];
  }

  Prediction out;
  out.vote_fractions.resize(model.classes.size());
  const double total = static_cast<double>(model.trees.size());
  for (std::size_t c = 0; c < votes.size(); ++c) {
    out.vote_fractions[c] = votes[c] / total;
  }
  out.label = model.classes[argmax_votes(votes)];
  return out;
}

std::vector<std::vector<std::size_t>> stratified_folds(const FeatureMatrix& m,
                                                       int k,
                                                       std::uint64_t seed) {
  if (k < 2) throw ParamError("fold count must be >= 2");
  if (static_cast<std::size_t>(k) > m.row_count()) {
    throw ParamError("fold count " + std::to_string(k) +
                     " exceeds row count " + std::to_string(m.row_count()));
  }

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t r = 0; r < m.row_count(); ++r) {
    by_class[m.rows[r].class_label].push_back(r);
  }

  auto rng = substream_rng(seed, 0);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t class_idx = 0;
  for (auto& [cls, rows] : by_class) {
    (void)cls;
    rng_shuffle(rng, rows);
    // Offsetting the deal per class spreads the remainders over the folds.
    for (std::size_t i = 0; i < rows.size(); ++i) {
      folds[(i + class_idx) % static_cast<std::size_t>(k)].push_back(rows[i]);
    }
    ++class_idx;
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

CVReport cross_validate(const FeatureMatrix& m, const ForestParams& p, int k,
                        std::uint64_t seed, int workers) {
  p.validate();
  m.validate();
  const auto folds = stratified_folds(m, k, seed);

  std::set<std::string> class_set;
  for (const auto& row : m.rows) class_set.insert(row.class_label);
  if (class_set.size() < 2) {
    throw ValidationError("cross-validation requires at least 2 classes");
  }

  CVReport report;
  report.fold_count = k;
  report.classes.assign(class_set.begin(), class_set.end());
  report.params = p;
  report.seed = seed;
  report.fold_accuracy.resize(folds.size());
  // vector<bool> is bit-packed, so the parallel section fills a byte vector.
  std::vector<std::uint8_t> degenerate(folds.size(), 0);

  std::map<std::string, std::size_t> class_pos;
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    class_pos.emplace(report.classes[i], i);
  }

  // Per-fold confusion slices merged after the parallel section, so the
  // totals cannot depend on scheduling.
  std::vector<std::vector<std::vector<std::size_t>>> fold_confusion(
      folds.size(),
      std::vector<std::vector<std::size_t>>(
          report.classes.size(),
          std::vector<std::size_t>(report.classes.size(), 0)));

  parallel_for(folds.size(), workers, [&](std::size_t f) {
    std::vector<char> held(m.row_count(), 0);
    for (std::size_t r : folds[f]) held[r] = 1;

    FeatureMatrix train;
    train.feature_names = m.feature_names;
    train.column_kinds = m.column_kinds;
    for (std::size_t r = 0; r < m.row_count(); ++r) {
      if (!held[r]) train.rows.push_back(m.rows[r]);
    }

    std::set<std::string> train_classes;
    for (const auto& row : train.rows) train_classes.insert(row.class_label);

    std::size_t correct = 0;
    if (train_classes.size() < 2) {
      // Degenerate fold: the training part has one class; predict it.
      degenerate[f] = 1;
      const std::string majority = *train_classes.begin();
      for (std::size_t r : folds[f]) {
        const auto& row = m.rows[r];
        if (row.class_label == majority) ++correct;
        ++fold_confusion[f][class_pos.at(row.class_label)]
                         [class_pos.at(majority)];
      }
    } else {
      ForestParams fold_params = p;
      auto fold_seed_rng = substream_rng(seed, f + 1);
      fold_params.seed = fold_seed_rng();
      const ForestModel model = fit_forest(train, fold_params, 1);
      for (std::size_t r : folds[f]) {
        const auto& row = m.rows[r];
        const Prediction pred = predict(model, row.values);
        if (pred.label == row.class_label) ++correct;
        ++fold_confusion[f][class_pos.at(row.class_label)]
                         [class_pos.at(pred.label)];
      }
    }
    report.fold_accuracy[f] =
        folds[f].empty() ? 0.0
                         : static_cast<double>(correct) / folds[f].size();
  });

  report.fold_degenerate.assign(folds.size(), false);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    report.fold_degenerate[f] = degenerate[f] != 0;
  }

  report.confusion.assign(
      report.classes.size(),
      std::vector<std::size_t>(report.classes.size(), 0));
  for (const auto& slice : fold_confusion) {
    for (std::size_t i = 0; i < slice.size(); ++i) {
      for (std::size_t j = 0; j < slice[i].size(); ++j) {
        report.confusion[i][j] += slice[i][j];
      }
    }
  }

  double sum = 0.0;
  for (double a : report.fold_accuracy) sum += a;
  report.mean_accuracy = sum / static_cast<double>(folds.size());
  return report;
}

namespace {

void write_config_lines(const CVReport& r, std::ostream& sink,
                        std::string_view prefix) {
  if (!r.representation.empty()) {
    sink << prefix << "representation: " << r.representation << '\n';
    sink << prefix << "epsilon: " << format_double(r.epsilon) << '\n';
  }
  sink << prefix << "folds: " << r.fold_count << '\n';
  sink << prefix << "trees: " << r.params.tree_count << '\n';
  sink << prefix << "depth: "
       << (r.params.max_depth == 0 ? std::string("unlimited")
                                   : std::to_string(r.params.max_depth))
       << '\n';
  sink << prefix << "min_leaf: " << r.params.min_leaf << '\n';
  sink << prefix << "mtry: "
       << (r.params.candidate_features == 0
               ? std::string("auto")
               : std::to_string(r.params.candidate_features))
       << '\n';
  sink << prefix << "seed: " << r.seed << '\n';
  if (r.labels_total > 0) {
    sink << prefix << "labels_total: " << r.labels_total << '\n';
    sink << prefix << "labels_kept: " << r.labels_kept << '\n';
    sink << prefix << "features_before_selection: " << r.features_before
         << '\n';
    sink << prefix << "features_after_selection: " << r.features_after << '\n';
  }
}

}  // namespace

void write_cv_report(const CVReport& r, std::ostream& sink) {
  write_config_lines(r, sink, "");
  for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f) {
    sink << "fold " << f + 1 << " accuracy: "
         << format_double(r.fold_accuracy[f])
         << (r.fold_degenerate[f] ? " (degenerate: single-class training part)"
                                  : "")
         << '\n';
  }
  sink << "mean_accuracy: " << format_double(r.mean_accuracy) << '\n';
  sink << "confusion_matrix (rows: true class, columns: predicted):\n";
  sink << "true\\pred";
  for (const auto& c : r.classes) sink << ',' << c;
  sink << '\n';
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    sink << r.classes[i];
    for (std::size_t j = 0; j < r.classes.size(); ++j) {
      sink << ',' << r.confusion[i][j];
    }
    sink << '\n';
  }
  if (!sink) throw IoError("failed writing report");
}

void write_cv_report_csv(const CVReport& r, std::ostream& sink) {
  write_config_lines(r, sink, "# ");
  sink << "fold,accuracy,degenerate\n";
  for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f) {
    sink << f + 1 << ',' << format_double(r.fold_accuracy[f]) << ','
         << (r.fold_degenerate[f] ? 1 : 0) << '\n';
  }
  sink << "mean," << format_double(r.mean_accuracy) << ",\n";
  if (!sink) throw IoError("failed writing report");
}

}  // namespace ibts
