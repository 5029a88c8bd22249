#include "ibts/features.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>
#include <unordered_map>

#include "ibts/parallel.hpp"

namespace ibts {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<std::string> SelectionReport::kept_labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.kept) out.push_back(e.label);
  }
  return out;
}

FeatureMatrix build_relfreq_matrix(const Dataset& d, int workers) {
  FeatureMatrix m;
  m.feature_names = d.alphabet();
  m.column_kinds.assign(m.feature_names.size(), ColumnKind::numeric);
  m.rows.resize(d.size());
  parallel_for(d.size(), workers, [&](std::size_t i) {
    const ESequence& s = d.sequences()[i];
    FeatureMatrix::Row row;
    row.id = s.id();
    row.class_label = d.classes()[i];
    row.values.reserve(m.feature_names.size());
    for (const auto& label : m.feature_names) {
      row.values.emplace_back(relative_frequency(s, label));
    }
    m.rows[i] = std::move(row);
  });
  return m;
}

FeatureMatrix build_temporal_matrix(const Dataset& d, int workers) {
  const auto& alphabet = d.alphabet();
  FeatureMatrix m;
  for (std::size_t a = 0; a < alphabet.size(); ++a) {
    for (std::size_t b = a + 1; b < alphabet.size(); ++b) {
      m.feature_names.push_back(alphabet[a] + ":" + alphabet[b]);
    }
  }
  m.column_kinds.assign(m.feature_names.size(), ColumnKind::relation);
  m.rows.resize(d.size());
  parallel_for(d.size(), workers, [&](std::size_t i) {
    const ESequence& s = d.sequences()[i];
    FeatureMatrix::Row row;
    row.id = s.id();
    row.class_label = d.classes()[i];
    row.values.reserve(m.feature_names.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      const EventInterval* first_a = first_occurrence(s, alphabet[a]);
      for (std::size_t b = a + 1; b < alphabet.size(); ++b) {
        const EventInterval* first_b = first_occurrence(s, alphabet[b]);
        row.values.emplace_back(first_a && first_b
                                    ? allen_relation(*first_a, *first_b)
                                    : Relation::none);
      }
    }
    m.rows[i] = std::move(row);
  });
  return m;
}

FeatureMatrix build_combined_matrix(const Dataset& d, int workers) {
  FeatureMatrix relfreq = build_relfreq_matrix(d, workers);
  FeatureMatrix temporal = build_temporal_matrix(d, workers);

  FeatureMatrix m = std::move(relfreq);
  m.feature_names.insert(m.feature_names.end(), temporal.feature_names.begin(),
                         temporal.feature_names.end());
  m.column_kinds.insert(m.column_kinds.end(), temporal.column_kinds.begin(),
                        temporal.column_kinds.end());
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    auto& dst = m.rows[i].values;
    const auto& src = temporal.rows[i].values;
    dst.insert(dst.end(), src.begin(), src.end());
  }
  return m;
}

double support(const Dataset& d, std::string_view label) {
  // Fixed summation order keeps the value independent of worker count.
  double sum = 0.0;
  for (const auto& s : d.sequences()) {
    sum += relative_frequency(s, label);
  }
  return sum / static_cast<double>(d.size());
}

SelectionReport select_labels(const Dataset& d, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw ParamError("epsilon must be in [0, 0.5), got " +
                     std::to_string(epsilon));
  }
  SelectionReport report;
  report.epsilon = epsilon;
  for (const auto& label : d.alphabet()) {
    const double sup = support(d, label);
    // Supports of exactly 0 or 1 are irrelevant at any epsilon; otherwise
    // the closed interval [epsilon, 1-epsilon] is kept.
    const bool discard =
        sup == 0.0 || sup == 1.0 || sup < epsilon || sup > 1.0 - epsilon;
    report.entries.push_back({label, sup, !discard});
  }
  return report;
}

FeatureMatrix apply_selection(const FeatureMatrix& m,
                              const SelectionReport& r) {
  std::unordered_map<std::string, bool> kept_of;
  for (const auto& e : r.entries) kept_of.emplace(e.label, e.kept);

  auto lookup = [&](const std::string& label) {
    auto it = kept_of.find(label);
    if (it == kept_of.end()) {
      throw ConsistencyError("matrix column references label '" + label +
                             "' missing from the selection report");
    }
    return it->second;
  };

  std::vector<std::size_t> kept_cols;
  for (std::size_t c = 0; c < m.column_count(); ++c) {
    const std::string& name = m.feature_names[c];
    bool keep;
    if (m.column_kinds[c] == ColumnKind::numeric) {
      keep = lookup(name);
    } else {
      const auto sep = name.find(':');
      if (sep == std::string::npos) {
        throw ConsistencyError("relation column '" + name +
                               "' is not a label pair");
      }
      keep = lookup(name.substr(0, sep)) && lookup(name.substr(sep + 1));
    }
    if (keep) kept_cols.push_back(c);
  }

  FeatureMatrix out;
  for (std::size_t c : kept_cols) {
    out.feature_names.push_back(m.feature_names[c]);
    out.column_kinds.push_back(m.column_kinds[c]);
  }
  out.rows.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    FeatureMatrix::Row slim;
    slim.id = row.id;
    slim.class_label = row.class_label;
    slim.values.reserve(kept_cols.size());
    for (std::size_t c : kept_cols) slim.values.push_back(row.values[c]);
    out.rows.push_back(std::move(slim));
  }
  return out;
}

void write_selection_report(const SelectionReport& r, std::ostream& sink) {
  sink << "# epsilon=" << format_double(r.epsilon) << '\n';
  sink << "label,support,verdict\n";
  for (const auto& e : r.entries) {
    sink << e.label << ',' << format_double(e.support) << ','
         << (e.kept ? "kept" : "discarded") << '\n';
  }
  if (!sink) throw IoError("failed writing selection report");
}

}  // namespace ibts
