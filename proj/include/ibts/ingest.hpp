#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ibts/core.hpp"

namespace ibts {

// A set of e-sequences with one class label each, ordered by sequence id.
// The alphabet is derived, never user-supplied.
class Dataset {
 public:
  // sequences and classes are parallel; ids must be unique. Sequences are
  // re-sorted by id into the canonical dataset order.
  Dataset(std::vector<ESequence> sequences, std::vector<std::string> classes);

  const std::vector<ESequence>& sequences() const { return sequences_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t size() const { return sequences_.size(); }

  std::size_t distinct_class_count() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<ESequence> sequences_;
  std::vector<std::string> classes_;  // parallel to sequences_
  std::vector<std::string> alphabet_;
};

enum class ColumnKind { numeric, relation };

// A matrix cell: a number for numeric columns, a relation token otherwise.
using Cell = std::variant<double, Relation>;

// Named feature columns x instance rows, plus a class label per row. Numeric
// cells are finite values in [0,1]; relation cells are any of the fourteen
// tokens. Row ids are unique.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> column_kinds;

  struct Row {
    std::string id;
    std::vector<Cell> values;
    std::string class_label;
    bool operator==(const Row&) const = default;
  };
  std::vector<Row> rows;

  std::size_t column_count() const { return feature_names.size(); }
  std::size_t row_count() const { return rows.size(); }

  // Throws ValidationError if any invariant fails.
  void validate() const;

  bool operator==(const FeatureMatrix&) const = default;
};

// Reads the two-file dataset format:
//   events:  sequence_id,label,begin,finish   (integer times)
//   classes: sequence_id,class
// Blank lines and lines starting with '#' are ignored; an optional header
// line is recognized in each file; LF and CRLF both work. Intervals are
// re-sorted into canonical order regardless of input order.
Dataset parse_dataset(std::istream& events_source, std::istream& classes_source);

// Writes the same two-file format (with header lines, LF endings).
// parse_dataset(write_dataset(d)) == d.
void write_dataset(const Dataset& d, std::ostream& events_sink,
                   std::ostream& classes_sink);

// CSV with header `id,<feature names...>,class`. Numeric cells carry enough
// digits to round-trip exactly; relation cells use the canonical tokens with
// none spelled `0`.
void write_feature_matrix(const FeatureMatrix& m, std::ostream& sink);

// Reads write_feature_matrix output. Column kinds are inferred: a column
// whose every value parses as a number is numeric, anything else must be
// all relation tokens.
FeatureMatrix read_feature_matrix(std::istream& source);

}  // namespace ibts
