#pragma once

// Hand-rolled generators for property tests. Kept independent of the
// library's synth module so they can serve as an oracle for it.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "ibts/ingest.hpp"

namespace testsupport {

inline std::size_t pick(std::mt19937& rng, std::size_t n) {
  return rng() % n;
}

// A valid sequence: same-label intervals are laid out left to right so they
// can never overlap.
inline ibts::ESequence random_sequence(std::mt19937& rng, std::string id,
                                       const std::vector<std::string>& labels,
                                       std::size_t max_intervals = 8,
                                       ibts::Time horizon = 40) {
  const std::size_t count = 1 + pick(rng, max_intervals);
  std::map<std::string, ibts::Time> cursor;  // next free begin per label
  std::vector<ibts::EventInterval> intervals;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& label = labels[pick(rng, labels.size())];
    ibts::Time b = cursor.count(label) ? cursor[label] : 0;
    b += static_cast<ibts::Time>(pick(rng, 5));
    const ibts::Time f = b + 1 + static_cast<ibts::Time>(pick(rng, 6));
    if (f > horizon) continue;
    intervals.emplace_back(label, b, f);
    cursor[label] = f;
  }
  if (intervals.empty()) {
    intervals.emplace_back(labels[pick(rng, labels.size())], 0, 1);
  }
  return ibts::ESequence(std::move(id), std::move(intervals));
}

inline ibts::Dataset random_dataset(std::mt19937& rng, std::size_t n,
                                    std::size_t alphabet_size = 4,
                                    ibts::Time horizon = 40) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < alphabet_size; ++i) {
    labels.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  std::vector<ibts::ESequence> seqs;
  std::vector<std::string> classes;
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = "r" + std::to_string(100 + i);
    seqs.push_back(random_sequence(rng, std::move(id), labels, 8, horizon));
    classes.push_back(pick(rng, 2) == 0 ? "x" : "y");
  }
  return ibts::Dataset(std::move(seqs), std::move(classes));
}

// A random mixed-kind feature matrix. Every relation column gets at least
// one non-none token, since an all-`0` column is indistinguishable from a
// numeric zero column in the serialized form.
inline ibts::FeatureMatrix random_matrix(std::mt19937& rng,
                                         std::size_t max_rows = 12,
                                         std::size_t max_cols = 8) {
  ibts::FeatureMatrix m;
  const std::size_t cols = 1 + pick(rng, max_cols);
  const std::size_t rows = 1 + pick(rng, max_rows);
  for (std::size_t c = 0; c < cols; ++c) {
    m.feature_names.push_back("f" + std::to_string(c));
    m.column_kinds.push_back(pick(rng, 2) == 0 ? ibts::ColumnKind::numeric
                                               : ibts::ColumnKind::relation);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    ibts::FeatureMatrix::Row row;
    row.id = "i" + std::to_string(100 + r);
    row.class_label = pick(rng, 2) == 0 ? "x" : "y";
    for (std::size_t c = 0; c < cols; ++c) {
      if (m.column_kinds[c] == ibts::ColumnKind::numeric) {
        row.values.emplace_back(static_cast<double>(pick(rng, 1001)) / 1000.0);
      } else {
        const auto& all = ibts::kAllRelations;
        ibts::Relation v = all[pick(rng, all.size())];
        if (r == rows - 1 && v == ibts::Relation::none) {
          v = ibts::Relation::meets;
        }
        row.values.emplace_back(v);
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace testsupport
