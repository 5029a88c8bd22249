#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ibts/ingest.hpp"

namespace ibts {

// Outcome of the support filter: one entry per alphabet label.
struct SelectionReport {
  struct Entry {
    std::string label;
    double support = 0.0;
    bool kept = true;
    bool operator==(const Entry&) const = default;
  };
  double epsilon = 0.0;
  std::vector<Entry> entries;  // sorted by label

  std::vector<std::string> kept_labels() const;
  bool operator==(const SelectionReport&) const = default;
};

// One numeric column per alphabet label (sorted), one row per sequence;
// cell (s, l) is the relative frequency of l in s.
FeatureMatrix build_relfreq_matrix(const Dataset& d, int workers = 1);

// One relation column per unordered label pair {l1, l2}, l1 < l2, named
// "l1:l2" and ordered lexicographically. The cell holds the relation of l1's
// first occurrence relative to l2's, or none when either label is absent.
FeatureMatrix build_temporal_matrix(const Dataset& d, int workers = 1);

// All relfreq columns followed by all temporal columns, same row order.
FeatureMatrix build_combined_matrix(const Dataset& d, int workers = 1);

// Mean relative frequency of `label` over all sequences.
double support(const Dataset& d, std::string_view label);

// Discards a label iff its support is exactly 0, exactly 1, or outside the
// closed interval [epsilon, 1 - epsilon]. epsilon must be in [0, 0.5).
SelectionReport select_labels(const Dataset& d, double epsilon);

// Drops the numeric columns of discarded labels and every pair column with a
// discarded endpoint. Rows are untouched. Throws ConsistencyError when a
// column references a label the report does not know.
FeatureMatrix apply_selection(const FeatureMatrix& m, const SelectionReport& r);

// CSV `label,support,verdict` with a `# epsilon=...` comment line.
void write_selection_report(const SelectionReport& r, std::ostream& sink);

}  // namespace ibts
