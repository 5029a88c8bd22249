#include "ibts/features.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "support/example_data.hpp"
#include "support/random_data.hpp"

using namespace ibts;

namespace {

// Straight-from-the-definition oracles, independent of the library path:
// summed raw durations over the raw span, and its mean over the dataset.
double oracle_relfreq(const ESequence& s, const std::string& label) {
  Time sum = 0, lo = s.intervals().front().begin(), hi = 0;
  for (const auto& e : s.intervals()) {
    lo = std::min(lo, e.begin());
    hi = std::max(hi, e.finish());
    if (e.label() == label) sum += e.finish() - e.begin();
  }
  return static_cast<double>(sum) / static_cast<double>(hi - lo);
}

double oracle_support(const Dataset& d, const std::string& label) {
  double sum = 0.0;
  for (const auto& s : d.sequences()) sum += oracle_relfreq(s, label);
  return sum / static_cast<double>(d.size());
}

double cell_num(const FeatureMatrix& m, std::size_t row, std::size_t col) {
  return std::get<double>(m.rows[row].values[col]);
}

Relation cell_rel(const FeatureMatrix& m, std::size_t row, std::size_t col) {
  return std::get<Relation>(m.rows[row].values[col]);
}

}  // namespace

TEST_CASE("relfreq matrix equals the direct-definition oracle") {
  const Dataset d = testsupport::example_dataset();
  const FeatureMatrix m = build_relfreq_matrix(d);
  REQUIRE(m.feature_names ==
          std::vector<std::string>{"A", "B", "C", "D", "E", "F"});
  REQUIRE(m.row_count() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(m.rows[r].id == d.sequences()[r].id());
    CHECK(m.rows[r].class_label == d.classes()[r]);
    for (std::size_t c = 0; c < 6; ++c) {
      CHECK(cell_num(m, r, c) ==
            oracle_relfreq(d.sequences()[r], m.feature_names[c]));
    }
  }
  // A few fixed values, display-rounded.
  CHECK(display_round(cell_num(m, 0, 1), 2) == "0.15");
  CHECK(display_round(cell_num(m, 1, 2), 2) == "0.62");
  CHECK(cell_num(m, 0, 5) == 0.0);
  CHECK(cell_num(m, 3, 3) == 0.35);
}

TEST_CASE("relfreq matrix of a single full-span interval is [[1.0]]") {
  const Dataset d(
      {ESequence("only", {EventInterval("X", 3, 9)})}, {"pos"});
  const FeatureMatrix m = build_relfreq_matrix(d);
  REQUIRE(m.feature_names == std::vector<std::string>{"X"});
  REQUIRE(m.row_count() == 1);
  CHECK(cell_num(m, 0, 0) == 1.0);
}

TEST_CASE("relfreq matrix matches the oracle on random datasets") {
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Dataset d = testsupport::random_dataset(rng, 50);
    const FeatureMatrix m = build_relfreq_matrix(d, 4);
    for (std::size_t r = 0; r < m.row_count(); ++r) {
      for (std::size_t c = 0; c < m.column_count(); ++c) {
        CHECK(cell_num(m, r, c) ==
              oracle_relfreq(d.sequences()[r], m.feature_names[c]));
      }
    }
  }
}

TEST_CASE("temporal matrix layout and fixed cells") {
  const Dataset d = testsupport::example_dataset();
  const FeatureMatrix m = build_temporal_matrix(d);
  REQUIRE(m.column_count() == 15);  // C(6,2)
  CHECK(m.feature_names.front() == "A:B");
  CHECK(m.feature_names.back() == "E:F");
  CHECK(m.feature_names[5] == "B:C");

  CHECK(cell_rel(m, 0, 0) == Relation::contains);       // A contains B
  CHECK(cell_rel(m, 1, 14) == Relation::equals);        // E equals F
  CHECK(cell_rel(m, 2, 0) == Relation::started_by);     // A started by B
  CHECK(cell_rel(m, 0, 2) == Relation::none);           // no D in row 1
  // B=[6,14] and C=[14,20] share endpoint 14, so the relation is meets.
  CHECK(cell_rel(m, 2, 5) == Relation::meets);
  // D=[5,12] lies entirely before E=[18,20].
  CHECK(cell_rel(m, 3, 12) == Relation::before);

  for (std::size_t r = 0; r < m.row_count(); ++r) {
    for (std::size_t c = 0; c < m.column_count(); ++c) {
      CHECK(std::holds_alternative<Relation>(m.rows[r].values[c]));
    }
  }
}

TEST_CASE("temporal matrix of a single-label dataset has no columns") {
  const Dataset d({ESequence("a", {EventInterval("X", 0, 2)}),
                   ESequence("b", {EventInterval("X", 1, 3)})},
                  {"p", "q"});
  const FeatureMatrix m = build_temporal_matrix(d);
  CHECK(m.column_count() == 0);
  CHECK(m.row_count() == 2);
}

TEST_CASE("temporal matrix depends only on first occurrences") {
  std::mt19937 rng(17);
  for (int i = 0; i < 40; ++i) {
    const Dataset d = testsupport::random_dataset(rng, 6);
    const FeatureMatrix before = build_temporal_matrix(d);

    // Append to each sequence a later-starting duplicate of a label it
    // already has.
    std::vector<ESequence> extended;
    for (const auto& s : d.sequences()) {
      auto intervals = s.intervals();
      Time max_finish = 0;
      for (const auto& e : intervals) {
        max_finish = std::max(max_finish, e.finish());
      }
      const auto& dup = intervals[rng() % intervals.size()];
      intervals.emplace_back(dup.label(), max_finish + 1, max_finish + 3);
      extended.emplace_back(s.id(), std::move(intervals));
    }
    const Dataset d2(std::move(extended), d.classes());
    const FeatureMatrix after = build_temporal_matrix(d2);

    CHECK(before.feature_names == after.feature_names);
    for (std::size_t r = 0; r < before.row_count(); ++r) {
      CHECK(before.rows[r].values == after.rows[r].values);
    }
  }
}

TEST_CASE("combined matrix is the column concatenation") {
  const Dataset d = testsupport::example_dataset();
  const FeatureMatrix combined = build_combined_matrix(d);
  const FeatureMatrix relfreq = build_relfreq_matrix(d);
  const FeatureMatrix temporal = build_temporal_matrix(d);

  REQUIRE(combined.column_count() == 21);  // 6 + 15
  REQUIRE(combined.row_count() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      CHECK(combined.rows[r].values[c] == relfreq.rows[r].values[c]);
    }
    for (std::size_t c = 0; c < 15; ++c) {
      CHECK(combined.rows[r].values[6 + c] == temporal.rows[r].values[c]);
    }
  }

  const Dataset single({ESequence("a", {EventInterval("X", 0, 2)}),
                        ESequence("b", {EventInterval("X", 1, 3)})},
                       {"p", "q"});
  CHECK(build_combined_matrix(single) == build_relfreq_matrix(single));
}

TEST_CASE("support equals the mean relative frequency") {
  const Dataset d = testsupport::example_dataset();
  CHECK(support(d, "A") == 1.0);
  CHECK(support(d, "C") == doctest::Approx(oracle_support(d, "C")).epsilon(1e-15));
  CHECK(support(d, "C") ==
        doctest::Approx((0.20 + 8.0 / 13.0 + 0.375 + 0.30) / 4.0).epsilon(1e-15));
  CHECK(support(d, "Z") == 0.0);

  std::mt19937 rng(23);
  for (int i = 0; i < 10; ++i) {
    const Dataset rd = testsupport::random_dataset(rng, 30);
    for (const auto& l : rd.alphabet()) {
      CHECK(support(rd, l) == doctest::Approx(oracle_support(rd, l)).epsilon(1e-15));
    }
  }
}

TEST_CASE("label selection on the worked example") {
  const Dataset d = testsupport::example_dataset();

  auto kept = [&](double eps) { return select_labels(d, eps).kept_labels(); };
  CHECK(kept(0.0) == std::vector<std::string>{"B", "C", "D", "E", "F"});
  CHECK(kept(0.01) == std::vector<std::string>{"B", "C", "D", "E", "F"});
  // Supports of D (0.0875) and F (~0.0577) fall below 0.10.
  CHECK(kept(0.10) == std::vector<std::string>{"B", "C", "E"});

  const SelectionReport r = select_labels(d, 0.01);
  REQUIRE(r.entries.size() == 6);
  CHECK(r.entries[0].label == "A");
  CHECK(r.entries[0].support == 1.0);
  CHECK(!r.entries[0].kept);

  CHECK_THROWS_AS(select_labels(d, 0.5), ParamError);
  CHECK_THROWS_AS(select_labels(d, -0.01), ParamError);
}

TEST_CASE("supports exactly at the threshold are kept") {
  // One sequence of span 4; X covers 1 unit, so sup(X) = 0.25 exactly.
  const Dataset d({ESequence("s", {EventInterval("X", 0, 1),
                                   EventInterval("Y", 0, 4)})},
                  {"p"});
  CHECK(support(d, "X") == 0.25);
  const SelectionReport r = select_labels(d, 0.25);
  CHECK(r.entries[0].label == "X");
  CHECK(r.entries[0].kept);
}

TEST_CASE("constant relative frequencies make a constant column") {
  // X covers exactly half the span of every sequence.
  const Dataset d({ESequence("a", {EventInterval("X", 0, 2),
                                   EventInterval("Y", 0, 4)}),
                   ESequence("b", {EventInterval("X", 1, 4),
                                   EventInterval("Y", 0, 6)}),
                   ESequence("c", {EventInterval("X", 0, 5),
                                   EventInterval("Y", 0, 10)})},
                  {"p", "q", "p"});
  const FeatureMatrix m = build_relfreq_matrix(d);
  REQUIRE(m.feature_names[0] == "X");
  CHECK(cell_num(m, 0, 0) == 0.5);
  CHECK(cell_num(m, 1, 0) == 0.5);
  CHECK(cell_num(m, 2, 0) == 0.5);
}

TEST_CASE("supports of exactly 0 and 1 are discarded at every epsilon") {
  // Z never occurs; W covers the whole span of both sequences.
  const Dataset d({ESequence("a", {EventInterval("W", 0, 4),
                                   EventInterval("X", 1, 3)}),
                   ESequence("b", {EventInterval("W", 2, 8),
                                   EventInterval("X", 2, 5)})},
                  {"p", "q"});
  CHECK(support(d, "W") == 1.0);
  CHECK(support(d, "Z") == 0.0);
  for (double eps : {0.0, 0.01, 0.1, 0.25, 0.49}) {
    const SelectionReport r = select_labels(d, eps);
    for (const auto& e : r.entries) {
      if (e.label == "W") CHECK(!e.kept);
      if (e.support == 0.0 || e.support == 1.0) CHECK(!e.kept);
    }
  }
}

TEST_CASE("selection is monotone in epsilon") {
  std::mt19937 rng(42);
  const double grid[] = {0.0, 0.05, 0.1, 0.2, 0.4};
  for (int i = 0; i < 50; ++i) {
    const Dataset d = testsupport::random_dataset(rng, 12);
    std::vector<std::set<std::string>> kept;
    for (double eps : grid) {
      const auto labels = select_labels(d, eps).kept_labels();
      kept.emplace_back(labels.begin(), labels.end());
    }
    for (std::size_t a = 0; a + 1 < kept.size(); ++a) {
      for (const auto& l : kept[a + 1]) {
        CHECK(kept[a].count(l) == 1);
      }
    }
  }
}

TEST_CASE("applying a selection drops label and pair columns") {
  const Dataset d = testsupport::example_dataset();
  const SelectionReport r = select_labels(d, 0.01);  // discards A only

  const FeatureMatrix relfreq = apply_selection(build_relfreq_matrix(d), r);
  CHECK(relfreq.feature_names ==
        std::vector<std::string>{"B", "C", "D", "E", "F"});

  const FeatureMatrix temporal = apply_selection(build_temporal_matrix(d), r);
  CHECK(temporal.column_count() == 10);  // C(5,2)
  for (const auto& name : temporal.feature_names) {
    CHECK(name.find("A:") == std::string::npos);
  }

  const FeatureMatrix combined = apply_selection(build_combined_matrix(d), r);
  CHECK(combined.column_count() == 15);

  // All-kept report is the identity.
  SelectionReport all = r;
  for (auto& e : all.entries) e.kept = true;
  CHECK(apply_selection(build_combined_matrix(d), all) ==
        build_combined_matrix(d));
}

TEST_CASE("selection report from a different dataset is rejected") {
  const Dataset d = testsupport::example_dataset();
  const Dataset other({ESequence("x", {EventInterval("Q", 0, 3)}),
                       ESequence("y", {EventInterval("R", 0, 3)})},
                      {"p", "q"});
  const SelectionReport r = select_labels(other, 0.0);
  CHECK_THROWS_AS(apply_selection(build_relfreq_matrix(d), r),
                  ConsistencyError);
}

TEST_CASE("temporal cell count and validity") {
  std::mt19937 rng(64);
  for (int i = 0; i < 10; ++i) {
    const Dataset d = testsupport::random_dataset(rng, 10, 5);
    const FeatureMatrix m = build_temporal_matrix(d);
    const std::size_t k = d.alphabet().size();
    CHECK(m.column_count() == k * (k - 1) / 2);
    CHECK_NOTHROW(m.validate());
  }
}

TEST_CASE("selection report serializes as CSV") {
  const Dataset d = testsupport::example_dataset();
  const SelectionReport r = select_labels(d, 0.01);
  std::ostringstream out;
  write_selection_report(r, out);
  const std::string text = out.str();
  CHECK(text.find("# epsilon=0.01\n") == 0);
  CHECK(text.find("label,support,verdict\n") != std::string::npos);
  CHECK(text.find("A,1,discarded\n") != std::string::npos);
  CHECK(text.find("B,0.225,kept\n") != std::string::npos);
}
