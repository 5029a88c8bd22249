#include "ibts/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace ibts {

Relation inverse(Relation r) {
  switch (r) {
    case Relation::equals: return Relation::equals;
    case Relation::before: return Relation::after;
    case Relation::meets: return Relation::met_by;
    case Relation::overlaps: return Relation::overlapped_by;
    case Relation::contains: return Relation::during;
    case Relation::starts: return Relation::started_by;
    case Relation::finished_by: return Relation::finishes;
    case Relation::after: return Relation::before;
    case Relation::met_by: return Relation::meets;
    case Relation::overlapped_by: return Relation::overlaps;
    case Relation::during: return Relation::contains;
    case Relation::started_by: return Relation::starts;
    case Relation::finishes: return Relation::finished_by;
    case Relation::none: return Relation::none;
  }
  throw Error("invalid relation value");
}

std::string_view relation_token(Relation r) {
  switch (r) {
    case Relation::equals: return "q";
    case Relation::before: return "b";
    case Relation::meets: return "m";
    case Relation::overlaps: return "o";
    case Relation::contains: return "c";
    case Relation::starts: return "s";
    case Relation::finished_by: return "f";
    case Relation::after: return "bi";
    case Relation::met_by: return "mi";
    case Relation::overlapped_by: return "oi";
    case Relation::during: return "ci";
    case Relation::started_by: return "si";
    case Relation::finishes: return "fi";
    case Relation::none: return "0";
  }
  throw Error("invalid relation value");
}

std::optional<Relation> relation_from_token(std::string_view token) {
  for (Relation r : kAllRelations) {
    if (relation_token(r) == token) return r;
  }
  return std::nullopt;
}

bool is_valid_event_label(std::string_view label) {
  if (label.empty()) return false;
  if (label.front() == ' ' || label.back() == ' ') return false;
  for (char c : label) {
    switch (c) {
      case ',': case ':': case '#': case '"':
      case '\r': case '\n': case '\t':
        return false;
      default:
        break;
    }
  }
  return true;
}

EventInterval::EventInterval(std::string label, Time begin, Time finish)
    : label_(std::move(label)), begin_(begin), finish_(finish) {
  if (!is_valid_event_label(label_)) {
    throw ValidationError("invalid event label '" + label_ + "'");
  }
  if (begin_ < 0) {
    throw ValidationError("interval '" + label_ +
                          "': begin time must be non-negative, got " +
                          std::to_string(begin_));
  }
  if (begin_ >= finish_) {
    throw ValidationError("interval '" + label_ + "': begin (" +
                          std::to_string(begin_) +
                          ") must be strictly less than finish (" +
                          std::to_string(finish_) + ")");
  }
}

Time duration(const EventInterval& e) { return e.finish() - e.begin(); }

ESequence::ESequence(std::string id, std::vector<EventInterval> intervals)
    : id_(std::move(id)), intervals_(std::move(intervals)) {
  if (intervals_.empty()) {
    throw ValidationError("sequence '" + id_ + "' has no intervals");
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const EventInterval& a, const EventInterval& b) {
              if (a.begin() != b.begin()) return a.begin() < b.begin();
              return a.label() < b.label();
            });
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    const auto& prev = intervals_[i - 1];
    const auto& cur = intervals_[i];
    if (prev.begin() == cur.begin() && prev.label() == cur.label()) {
      throw ValidationError("sequence '" + id_ + "': intervals of label '" +
                            cur.label() + "' share begin time " +
                            std::to_string(cur.begin()));
    }
  }
  // Same-label intervals must be disjoint; a shared endpoint is allowed.
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    for (std::size_t j = i + 1; j < intervals_.size(); ++j) {
      if (intervals_[j].begin() >= intervals_[i].finish()) break;
      if (intervals_[i].label() == intervals_[j].label()) {
        throw ValidationError(
            "sequence '" + id_ + "': intervals of label '" +
            intervals_[i].label() + "' overlap ([" +
            std::to_string(intervals_[i].begin()) + "," +
            std::to_string(intervals_[i].finish()) + "] and [" +
            std::to_string(intervals_[j].begin()) + "," +
            std::to_string(intervals_[j].finish()) + "])");
      }
    }
  }
}

Time sequence_duration(const ESequence& s) {
  const auto& iv = s.intervals();
  Time min_begin = iv.front().begin();
  Time max_finish = iv.front().finish();
  for (const auto& e : iv) max_finish = std::max(max_finish, e.finish());
  return max_finish - min_begin;
}

Relation allen_relation(const EventInterval& e1, const EventInterval& e2) {
  const Time b1 = e1.begin(), f1 = e1.finish();
  const Time b2 = e2.begin(), f2 = e2.finish();

  if (b1 == b2 && f1 == f2) return Relation::equals;
  if (f1 < b2) return Relation::before;
  if (f2 < b1) return Relation::after;
  if (f1 == b2) return Relation::meets;
  if (f2 == b1) return Relation::met_by;
  if (b1 == b2) return f1 < f2 ? Relation::starts : Relation::started_by;
  if (f1 == f2) return b1 < b2 ? Relation::finished_by : Relation::finishes;
  if (b1 < b2) return f2 < f1 ? Relation::contains : Relation::overlaps;
  return f1 < f2 ? Relation::during : Relation::overlapped_by;
}

double relative_frequency(const ESequence& s, std::string_view label) {
  Time total = 0;
  for (const auto& e : s.intervals()) {
    if (e.label() == label) total += duration(e);
  }
  return static_cast<double>(total) /
         static_cast<double>(sequence_duration(s));
}

const EventInterval* first_occurrence(const ESequence& s,
                                      std::string_view label) {
  // Canonical order sorts by begin, so the first match has the minimal begin.
  for (const auto& e : s.intervals()) {
    if (e.label() == label) return &e;
  }
  return nullptr;
}

std::string display_round(double v, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  const bool neg = v < 0;
  const double mag = std::floor(std::abs(v) * scale + 0.5);
  const auto units = static_cast<long long>(mag);
  const auto div = static_cast<long long>(scale);
  std::string out = neg && units != 0 ? "-" : "";
  out += std::to_string(units / div);
  if (decimals > 0) {
    std::string frac = std::to_string(units % div);
    out += '.';
    out += std::string(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace ibts
