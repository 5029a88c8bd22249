#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ibts/ingest.hpp"

namespace ibts {

// Random-forest hyperparameters. Zero means "pick the default": unlimited
// depth, mtry = floor(sqrt(encoded feature count)).
struct ForestParams {
  int tree_count = 500;
  int max_depth = 0;           // 0 = unlimited
  int min_leaf = 1;
  int candidate_features = 0;  // 0 = floor(sqrt(p)), clamped to [1, p]
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const ForestParams&) const = default;
};

// A feature matrix flattened to numbers: numeric columns pass through and
// each relation column becomes one 0/1 indicator per token present in it.
struct EncodedMatrix {
  struct ColumnEncoding {
    std::string source_name;
    ColumnKind kind = ColumnKind::numeric;
    std::size_t first_encoded = 0;         // index of the first encoded column
    std::vector<Relation> tokens;          // relation columns: one per indicator
    bool operator==(const ColumnEncoding&) const = default;
  };

  std::size_t row_count = 0;
  std::size_t col_count = 0;
  std::vector<double> values;              // row-major
  std::vector<std::string> column_names;   // "A" or "A:B=c"
  std::vector<ColumnEncoding> encodings;   // one per source column
  std::vector<std::string> row_ids;
  std::vector<std::string> row_classes;

  double at(std::size_t r, std::size_t c) const {
    return values[r * col_count + c];
  }
};

EncodedMatrix one_hot_encode(const FeatureMatrix& m);

// Inverse of one_hot_encode (exact: indicators are 0/1 and numeric cells pass
// through untouched).
FeatureMatrix decode(const EncodedMatrix& em);

// Encodes one row against an existing schema. Tokens never seen at fit time
// produce all-zero indicators for their column.
std::vector<double> encode_row(const std::vector<EncodedMatrix::ColumnEncoding>& encodings,
                               std::size_t encoded_width,
                               const std::vector<Cell>& row);

// A fitted forest of CART-style trees over the encoded feature space.
struct ForestModel {
  struct Node {
    std::int32_t feature = -1;  // < 0: leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint32_t> votes;  // leaf class counts, parallel to classes
  };
  struct Tree {
    std::vector<Node> nodes;  // root at 0
  };

  std::vector<std::string> classes;  // sorted
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> column_kinds;
  std::vector<EncodedMatrix::ColumnEncoding> encodings;
  std::size_t encoded_width = 0;
  std::vector<Tree> trees;
  ForestParams params;
};

// Bootstrap row indices for one tree: row_count draws with replacement from
// the tree's own RNG substream. Exposed so resampling behaviour is testable.
std::vector<std::size_t> bootstrap_indices(std::uint64_t seed,
                                           std::uint64_t tree_index,
                                           std::size_t row_count);

// Trains tree_count trees, each on its own bootstrap, sampling
// candidate_features features per node and splitting on the best
// Gini-reducing midpoint. Deterministic given params.seed regardless of
// worker count. Requires >= 2 classes and >= 1 encoded feature.
ForestModel fit_forest(const FeatureMatrix& m, const ForestParams& p,
                       int workers = 1);

struct Prediction {
  std::string label;
  std::vector<double> vote_fractions;  // parallel to model.classes
};

// Majority vote over trees; ties go to the lexicographically smallest class.
Prediction predict(const ForestModel& model, const std::vector<Cell>& row);

// k disjoint index sets covering all rows; per-class counts across folds
// differ by at most one. Deterministic given seed.
std::vector<std::vector<std::size_t>> stratified_folds(const FeatureMatrix& m,
                                                       int k,
                                                       std::uint64_t seed);

struct CVReport {
  int fold_count = 0;
  std::vector<double> fold_accuracy;
  std::vector<bool> fold_degenerate;  // training part was single-class
  double mean_accuracy = 0.0;
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]

  // Run configuration, echoed into serialized reports.
  std::string representation;  // filled by the caller when applicable
  double epsilon = 0.0;
  ForestParams params;
  std::uint64_t seed = 0;
  std::size_t labels_total = 0;
  std::size_t labels_kept = 0;
  std::size_t features_before = 0;
  std::size_t features_after = 0;
};

// Stratified k-fold cross-validation: fit on k-1 folds, score the held-out
// fold. A fold whose training part is single-class falls back to predicting
// that class and is flagged, not an abort.
CVReport cross_validate(const FeatureMatrix& m, const ForestParams& p, int k,
                        std::uint64_t seed, int workers = 1);

// Human-readable report (also the CLI's stdout format).
void write_cv_report(const CVReport& r, std::ostream& sink);

// CSV: config comment, `fold,accuracy` rows, then a mean row.
void write_cv_report_csv(const CVReport& r, std::ostream& sink);

}  // namespace ibts
