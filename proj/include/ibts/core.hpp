#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ibts/errors.hpp"

namespace ibts {

// Time points are non-negative integers in abstract units. Real-valued
// timestamps must be discretized by the caller; integer endpoints keep every
// relation predicate exact.
using Time = std::int64_t;

// The thirteen temporal relations between two intervals, plus `none` for the
// absence of a pair. The first seven are the primary relations; the next six
// are their inverses (r(a,b) holds iff primary(b,a) holds). `equals` and
// `none` are their own inverses.
enum class Relation : std::uint8_t {
  equals,         // q
  before,         // b
  meets,          // m
  overlaps,       // o
  contains,       // c
  starts,         // s
  finished_by,    // f
  after,          // bi
  met_by,         // mi
  overlapped_by,  // oi
  during,         // ci
  started_by,     // si
  finishes,       // fi
  none,           // serialized as 0
};

inline constexpr std::array<Relation, 14> kAllRelations = {
    Relation::equals,   Relation::before,     Relation::meets,
    Relation::overlaps, Relation::contains,   Relation::starts,
    Relation::finished_by, Relation::after,   Relation::met_by,
    Relation::overlapped_by, Relation::during, Relation::started_by,
    Relation::finishes, Relation::none,
};

Relation inverse(Relation r);

// Canonical plain-text spelling: q b m o c s f bi mi oi ci si fi, and "0"
// for none.
std::string_view relation_token(Relation r);
std::optional<Relation> relation_from_token(std::string_view token);

// Event labels appear in CSV fields and pair-column names, so the delimiter
// characters of those formats are reserved.
bool is_valid_event_label(std::string_view label);

// One labeled interval. Valid iff 0 <= begin < finish and the label is a
// valid event label.
class EventInterval {
 public:
  EventInterval(std::string label, Time begin, Time finish);

  const std::string& label() const { return label_; }
  Time begin() const { return begin_; }
  Time finish() const { return finish_; }

  bool operator==(const EventInterval&) const = default;

 private:
  std::string label_;
  Time begin_;
  Time finish_;
};

Time duration(const EventInterval& e);

// An identified, canonically ordered interval sequence. Construction sorts
// the intervals (ascending begin, ties by label) and validates:
//   - non-empty
//   - no two intervals share both begin and label
//   - same-label intervals do not overlap (touching endpoints are fine)
class ESequence {
 public:
  ESequence(std::string id, std::vector<EventInterval> intervals);

  const std::string& id() const { return id_; }
  const std::vector<EventInterval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }

  bool operator==(const ESequence&) const = default;

 private:
  std::string id_;
  std::vector<EventInterval> intervals_;
};

// Span between the earliest begin and the latest finish.
Time sequence_duration(const ESequence& s);

// The relation of e1 relative to e2. Total over valid intervals: exactly one
// of the thirteen labels, never `none`.
Relation allen_relation(const EventInterval& e1, const EventInterval& e2);

// Duration-weighted frequency of `label` in `s`: summed durations of all
// matching intervals divided by the sequence span. Full precision; rounding
// is a display concern only.
double relative_frequency(const ESequence& s, std::string_view label);

// The interval of `label` with the minimal begin time, or nullptr if the
// label does not occur. Unique because same-label intervals cannot overlap.
const EventInterval* first_occurrence(const ESequence& s,
                                      std::string_view label);

// Fixed-decimal rendering with ties rounded away from zero, e.g.
// display_round(0.125, 2) == "0.13". Used for human-facing summaries.
std::string display_round(double v, int decimals);

}  // namespace ibts
