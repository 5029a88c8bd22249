#include "ibts/core.hpp"

#include <doctest.h>

#include <random>
#include <set>

#include "support/example_data.hpp"
#include "support/random_data.hpp"

using namespace ibts;

namespace {

// Independent endpoint predicates, one per relation, used to cross-check the
// classifier's dispatch.
bool holds(Relation r, Time b1, Time f1, Time b2, Time f2) {
  switch (r) {
    case Relation::equals: return b1 == b2 && f1 == f2;
    case Relation::before: return f1 < b2;
    case Relation::meets: return f1 == b2;
    case Relation::overlaps: return b1 < b2 && b2 < f1 && f1 < f2;
    case Relation::contains: return b1 < b2 && f2 < f1;
    case Relation::starts: return b1 == b2 && f1 < f2;
    case Relation::finished_by: return b1 < b2 && f1 == f2;
    default: return holds(inverse(r), b2, f2, b1, f1);
  }
}

}  // namespace

TEST_CASE("interval duration") {
  CHECK(duration(EventInterval("A", 8, 28)) == 20);
  CHECK(duration(EventInterval("B", 18, 21)) == 3);
  CHECK(duration(EventInterval("X", 5, 6)) == 1);
}

TEST_CASE("interval construction rejects invalid input") {
  CHECK_THROWS_AS(EventInterval("A", 7, 7), ValidationError);
  CHECK_THROWS_AS(EventInterval("A", 9, 3), ValidationError);
  CHECK_THROWS_AS(EventInterval("A", -1, 3), ValidationError);
  CHECK_THROWS_AS(EventInterval("", 0, 3), ValidationError);
  CHECK_THROWS_AS(EventInterval("a,b", 0, 3), ValidationError);
  CHECK_THROWS_AS(EventInterval("a:b", 0, 3), ValidationError);
  CHECK_THROWS_AS(EventInterval(" a", 0, 3), ValidationError);
  CHECK_NOTHROW(EventInterval("head tilt right", 0, 3));
}

TEST_CASE("sequence duration spans earliest begin to latest finish") {
  const auto seqs = testsupport::example_sequences();
  CHECK(sequence_duration(seqs[0]) == 20);  // 28 - 8
  CHECK(sequence_duration(seqs[1]) == 13);  // 14 - 1
  CHECK(sequence_duration(ESequence("x", {EventInterval("X", 3, 9)})) == 6);
}

TEST_CASE("sequence canonicalization and invariants") {
  // Input order does not matter; construction sorts by (begin, label).
  ESequence s("s", {EventInterval("B", 5, 7), EventInterval("A", 5, 6),
                    EventInterval("C", 1, 2)});
  CHECK(s.intervals()[0].label() == "C");
  CHECK(s.intervals()[1].label() == "A");
  CHECK(s.intervals()[2].label() == "B");

  CHECK_THROWS_AS(ESequence("s", {}), ValidationError);
  // Same label, same begin.
  CHECK_THROWS_AS(ESequence("s", {EventInterval("A", 1, 3),
                                  EventInterval("A", 1, 5)}),
                  ValidationError);
  // Same label, overlapping.
  CHECK_THROWS_AS(ESequence("s", {EventInterval("A", 1, 4),
                                  EventInterval("A", 3, 6)}),
                  ValidationError);
  // Touching at an endpoint is fine.
  CHECK_NOTHROW(ESequence("s", {EventInterval("A", 1, 4),
                                EventInterval("A", 4, 6)}));
  // Different labels may overlap arbitrarily.
  CHECK_NOTHROW(ESequence("s", {EventInterval("A", 1, 4),
                                EventInterval("B", 1, 4)}));
}

TEST_CASE("relation classification on known pairs") {
  auto rel = [](Time b1, Time f1, Time b2, Time f2) {
    return allen_relation(EventInterval("x", b1, f1),
                          EventInterval("y", b2, f2));
  };
  CHECK(rel(8, 28, 18, 21) == Relation::contains);
  CHECK(rel(8, 28, 24, 28) == Relation::finished_by);
  CHECK(rel(8, 11, 8, 11) == Relation::equals);
  CHECK(rel(6, 22, 6, 14) == Relation::started_by);
  CHECK(rel(16, 22, 5, 12) == Relation::after);
  CHECK(rel(0, 1, 0, 1) == Relation::equals);
  CHECK(rel(6, 14, 14, 20) == Relation::meets);
  CHECK(rel(1, 5, 3, 8) == Relation::overlaps);
  CHECK(rel(3, 8, 1, 5) == Relation::overlapped_by);
  CHECK(rel(3, 5, 1, 8) == Relation::during);
  CHECK(rel(1, 3, 3, 8) == Relation::meets);
  CHECK(rel(3, 8, 1, 3) == Relation::met_by);
  CHECK(rel(2, 8, 1, 8) == Relation::finishes);
  CHECK(rel(1, 3, 1, 8) == Relation::starts);
}

TEST_CASE("relation tokens and inverses") {
  CHECK(relation_token(Relation::equals) == "q");
  CHECK(relation_token(Relation::after) == "bi");
  CHECK(relation_token(Relation::during) == "ci");
  CHECK(relation_token(Relation::finishes) == "fi");
  CHECK(relation_token(Relation::none) == "0");
  CHECK(relation_from_token("si") == Relation::started_by);
  CHECK(relation_from_token("0") == Relation::none);
  CHECK(!relation_from_token("z").has_value());

  for (Relation r : kAllRelations) {
    CHECK(inverse(inverse(r)) == r);
    CHECK(relation_from_token(relation_token(r)) == r);
  }
  CHECK(inverse(Relation::equals) == Relation::equals);
  CHECK(inverse(Relation::none) == Relation::none);
}

TEST_CASE("exactly one relation holds for every small interval pair") {
  std::vector<EventInterval> intervals;
  for (Time b = 0; b <= 8; ++b) {
    for (Time f = b + 1; f <= 8; ++f) {
      intervals.emplace_back("x", b, f);
    }
  }
  for (const auto& e1 : intervals) {
    for (const auto& e2 : intervals) {
      int matched = 0;
      Relation found = Relation::none;
      for (Relation r : kAllRelations) {
        if (r == Relation::none) continue;
        if (holds(r, e1.begin(), e1.finish(), e2.begin(), e2.finish())) {
          ++matched;
          found = r;
        }
      }
      REQUIRE(matched == 1);
      REQUIRE(allen_relation(e1, e2) == found);
      REQUIRE(allen_relation(e1, e2) == inverse(allen_relation(e2, e1)));
    }
  }
}

TEST_CASE("relative frequency on the worked example") {
  const auto seqs = testsupport::example_sequences();
  CHECK(relative_frequency(seqs[0], "B") == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(relative_frequency(seqs[1], "C") ==
        doctest::Approx(8.0 / 13.0).epsilon(1e-12));
  CHECK(relative_frequency(seqs[0], "F") == 0.0);
  // A label spanning the whole sequence has frequency exactly 1.
  ESequence whole("w", {EventInterval("X", 2, 9)});
  CHECK(relative_frequency(whole, "X") == 1.0);
}

TEST_CASE("first occurrence picks the minimal begin") {
  const auto seqs = testsupport::example_sequences();
  const EventInterval* c4 = first_occurrence(seqs[3], "C");
  REQUIRE(c4 != nullptr);
  CHECK(*c4 == EventInterval("C", 16, 22));
  CHECK(first_occurrence(seqs[0], "D") == nullptr);

  ESequence two("t", {EventInterval("X", 1, 2), EventInterval("X", 5, 9)});
  const EventInterval* first = first_occurrence(two, "X");
  REQUIRE(first != nullptr);
  CHECK(first->begin() == 1);
}

TEST_CASE("relative frequency stays in [0,1] and sums dominate each term") {
  std::mt19937 rng(7);
  const std::vector<std::string> labels = {"A", "B", "C"};
  for (int i = 0; i < 200; ++i) {
    const auto s = testsupport::random_sequence(rng, "s", labels);
    double sum = 0.0;
    for (const auto& l : labels) {
      const double r = relative_frequency(s, l);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
      sum += r;
    }
    for (const auto& l : labels) {
      CHECK(sum >= relative_frequency(s, l));
    }
  }
}

TEST_CASE("translation invariance") {
  std::mt19937 rng(11);
  const std::vector<std::string> labels = {"A", "B", "C"};
  for (int i = 0; i < 100; ++i) {
    const auto s = testsupport::random_sequence(rng, "s", labels);
    std::vector<EventInterval> shifted;
    for (const auto& e : s.intervals()) {
      shifted.emplace_back(e.label(), e.begin() + 7, e.finish() + 7);
    }
    const ESequence t("s", std::move(shifted));
    for (const auto& l : labels) {
      CHECK(relative_frequency(s, l) == relative_frequency(t, l));
    }
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < s.size(); ++b) {
        CHECK(allen_relation(s.intervals()[a], s.intervals()[b]) ==
              allen_relation(t.intervals()[a], t.intervals()[b]));
      }
    }
  }
}

TEST_CASE("display rounding is half away from zero") {
  CHECK(display_round(0.375, 2) == "0.38");
  CHECK(display_round(0.125, 2) == "0.13");
  CHECK(display_round(8.0 / 13.0, 2) == "0.62");
  CHECK(display_round(1.0, 2) == "1.00");
  CHECK(display_round(0.0, 2) == "0.00");
  CHECK(display_round(0.2307692307692308, 2) == "0.23");
  CHECK(display_round(2.0, 0) == "2");
}
