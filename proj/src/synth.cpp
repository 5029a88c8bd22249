#include "ibts/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ibts/parallel.hpp"
#include "ibts/rng.hpp"

namespace ibts {

namespace {

constexpr int kIntervalAttempts = 1000;
constexpr int kSequenceAttempts = 100;

bool overlaps_same_label(const std::vector<EventInterval>& accepted,
                         const std::string& label, Time b, Time f) {
  for (const auto& e : accepted) {
    if (e.label() == label && b < e.finish() && e.begin() < f) return true;
  }
  return false;
}

// Integer-only geometric-ish duration: mean about `mean` steps.
Time geometric_duration(std::mt19937_64& rng, Time mean, Time cap) {
  Time d = 1;
  if (mean < 2) return std::min<Time>(1, cap);
  while (d < cap && rng_below(rng, static_cast<std::uint64_t>(mean)) != 0) {
    ++d;
  }
  return d;
}

// One random interval of `label` within [0, horizon], rejecting same-label
// overlaps against `accepted`.
EventInterval random_interval(std::mt19937_64& rng, const std::string& label,
                              Time horizon, Time mean_duration,
                              const std::vector<EventInterval>& accepted) {
  for (int attempt = 0; attempt < kIntervalAttempts; ++attempt) {
    const Time b = static_cast<Time>(
        rng_below(rng, static_cast<std::uint64_t>(horizon)));
    const Time d = geometric_duration(rng, mean_duration, horizon - b);
    const Time f = b + std::max<Time>(1, d);
    if (f > horizon) continue;
    if (overlaps_same_label(accepted, label, b, f)) continue;
    return EventInterval(label, b, f);
  }
  throw GenerationError("could not place an interval of label '" + label +
                        "' within the horizon after " +
                        std::to_string(kIntervalAttempts) + " attempts");
}

// A pair of intervals (for label1/label2) whose relation, first relative to
// second, is exactly `rel`. Built directly from the endpoint predicates.
std::pair<EventInterval, EventInterval> sample_pair_with_relation(
    std::mt19937_64& rng, const std::string& l1, const std::string& l2,
    Relation rel, Time horizon) {
  const bool inverted = rel == inverse(rel) ? false
                        : (rel == Relation::after || rel == Relation::met_by ||
                           rel == Relation::overlapped_by ||
                           rel == Relation::during ||
                           rel == Relation::started_by ||
                           rel == Relation::finishes);
  const Relation primary = inverted ? inverse(rel) : rel;
  const Time h = horizon;

  auto below = [&](Time n) {
    return static_cast<Time>(rng_below(rng, static_cast<std::uint64_t>(n)));
  };

  for (int attempt = 0; attempt < kIntervalAttempts; ++attempt) {
    Time b1 = 0, f1 = 0, b2 = 0, f2 = 0;
    switch (primary) {
      case Relation::equals:
        if (h < 1) throw GenerationError("horizon too small for q");
        b1 = below(h);
        f1 = b1 + 1 + below(h - b1);
        b2 = b1;
        f2 = f1;
        break;
      case Relation::before:
        if (h < 3) throw GenerationError("horizon too small for b");
        b1 = below(h - 2);
        f1 = b1 + 1 + below(h - b1 - 2);
        b2 = f1 + 1 + below(h - f1 - 1);
        f2 = b2 + 1 + below(h - b2);
        break;
      case Relation::meets:
        if (h < 2) throw GenerationError("horizon too small for m");
        b1 = below(h - 1);
        f1 = b1 + 1 + below(h - b1 - 1);
        b2 = f1;
        f2 = b2 + 1 + below(h - b2);
        break;
      case Relation::overlaps:
        // b1 < b2 < f1 < f2
        if (h < 3) throw GenerationError("horizon too small for o");
        b1 = below(h - 2);
        f1 = b1 + 2 + below(h - b1 - 2);
        if (f1 >= h) continue;
        b2 = b1 + 1 + below(f1 - b1 - 1);
        f2 = f1 + 1 + below(h - f1);
        break;
      case Relation::contains:
        // b1 < b2 < f2 < f1
        if (h < 3) throw GenerationError("horizon too small for c");
        b1 = below(h - 2);
        f1 = b1 + 3 + below(h - b1 - 2);
        if (f1 > h) continue;
        b2 = b1 + 1 + below(f1 - b1 - 2);
        f2 = b2 + 1 + below(f1 - b2 - 1);
        break;
      case Relation::starts:
        // b1 == b2, f1 < f2
        if (h < 2) throw GenerationError("horizon too small for s");
        b1 = below(h - 1);
        f1 = b1 + 1 + below(h - b1 - 1);
        if (f1 >= h) continue;
        b2 = b1;
        f2 = f1 + 1 + below(h - f1);
        break;
      case Relation::finished_by:
        // b1 < b2, f1 == f2
        if (h < 2) throw GenerationError("horizon too small for f");
        b1 = below(h - 1);
        f1 = b1 + 2 + below(h - b1 - 1);
        if (f1 > h) continue;
        b2 = b1 + 1 + below(f1 - b1 - 1);
        f2 = f1;
        break;
      default:
        throw GenerationError("relation rule must use one of the 13 relations");
    }
    if (f1 > h || f2 > h) continue;
    EventInterval e1(l1, inverted ? b2 : b1, inverted ? f2 : f1);
    EventInterval e2(l2, inverted ? b1 : b2, inverted ? f1 : f2);
    return {std::move(e1), std::move(e2)};
  }
  throw GenerationError("could not realize the planted relation in the horizon");
}

// Splits `total` duration into disjoint chunks placed inside [lo, hi].
void place_coverage(std::mt19937_64& rng, std::vector<EventInterval>& out,
                    const std::string& label, Time lo, Time hi, Time total) {
  if (total <= 0) return;
  const Time span = hi - lo;
  Time n_chunks =
      std::min<Time>(total, 1 + static_cast<Time>(rng_below(rng, 3)));
  std::vector<Time> sizes(static_cast<std::size_t>(n_chunks),
                          total / n_chunks);
  for (Time i = 0; i < total % n_chunks; ++i) ++sizes[static_cast<size_t>(i)];

  Time slack = span - total;
  Time cursor = lo;
  for (Time size : sizes) {
    const Time gap =
        slack > 0
            ? static_cast<Time>(rng_below(
                  rng, static_cast<std::uint64_t>(slack) + 1))
            : 0;
    slack -= gap;
    out.emplace_back(label, cursor + gap, cursor + gap + size);
    cursor += gap + size;
  }
}

ESequence generate_sequence(const SynthSpec& spec,
                            const std::vector<std::string>& alphabet,
                            const std::string& id, std::uint64_t index,
                            bool target, std::string& class_out) {
  auto rng = substream_rng(spec.seed, index);
  const Time mean_duration = std::max<Time>(1, spec.horizon / 8);
  const PlantedRule& rule = spec.rule;

  for (int attempt = 0; attempt < kSequenceAttempts; ++attempt) {
    std::vector<std::string> pool;
    for (const auto& l : alphabet) {
      if (rule.kind == PlantedRule::Kind::presence && l == rule.label1 &&
          !target)
        continue;
      if (rule.kind == PlantedRule::Kind::relation &&
          (l == rule.label1 || l == rule.label2))
        continue;
      if (rule.kind == PlantedRule::Kind::frequency && l == rule.label1)
        continue;
      pool.push_back(l);
    }
    if (pool.empty() && rule.kind == PlantedRule::Kind::presence) {
      throw GenerationError("alphabet too small for the planted rule");
    }

    const std::size_t count =
        pool.empty() ? 0
                     : spec.min_intervals +
                           static_cast<std::size_t>(rng_below(
                               rng, spec.max_intervals - spec.min_intervals + 1));

    std::vector<EventInterval> intervals;
    intervals.reserve(count + 2);

    switch (rule.kind) {
      case PlantedRule::Kind::presence: {
        if (target) {
          intervals.push_back(random_interval(rng, rule.label1, spec.horizon,
                                              mean_duration, intervals));
        }
        for (std::size_t i = 0; i < count; ++i) {
          const auto& label = pool[rng_below(rng, pool.size())];
          intervals.push_back(random_interval(rng, label, spec.horizon,
                                              mean_duration, intervals));
        }
        break;
      }
      case PlantedRule::Kind::relation: {
        for (std::size_t i = 0; i < count; ++i) {
          const auto& label = pool[rng_below(rng, pool.size())];
          intervals.push_back(random_interval(rng, label, spec.horizon,
                                              mean_duration, intervals));
        }
        if (target) {
          auto [e1, e2] = sample_pair_with_relation(
              rng, rule.label1, rule.label2, rule.relation, spec.horizon);
          intervals.push_back(std::move(e1));
          intervals.push_back(std::move(e2));
        } else {
          // Either drop one endpoint label or plant a different relation.
          if (rng_below(rng, 2) == 0) {
            if (rng_below(rng, 2) == 0 || intervals.empty()) {
              intervals.push_back(random_interval(
                  rng, rule.label1, spec.horizon, mean_duration, intervals));
            }
          } else {
            for (int tries = 0; tries < kIntervalAttempts; ++tries) {
              EventInterval e1 = random_interval(rng, rule.label1,
                                                 spec.horizon, mean_duration,
                                                 intervals);
              EventInterval e2 = random_interval(rng, rule.label2,
                                                 spec.horizon, mean_duration,
                                                 intervals);
              if (allen_relation(e1, e2) == rule.relation) continue;
              intervals.push_back(std::move(e1));
              intervals.push_back(std::move(e2));
              break;
            }
            if (intervals.size() < count + 2) {
              continue;  // regenerate the whole sequence
            }
          }
        }
        break;
      }
      case PlantedRule::Kind::frequency: {
        for (std::size_t i = 0; i < count; ++i) {
          const auto& label = pool[rng_below(rng, pool.size())];
          intervals.push_back(random_interval(rng, label, spec.horizon,
                                              mean_duration, intervals));
        }
        Time lo = intervals.front().begin(), hi = intervals.front().finish();
        for (const auto& e : intervals) {
          lo = std::min(lo, e.begin());
          hi = std::max(hi, e.finish());
        }
        const Time span = hi - lo;
        const Time needed = static_cast<Time>(
            std::ceil(rule.threshold * static_cast<double>(span) -
                      1e-9));
        if (needed < 1 || needed > span) continue;
        Time total;
        if (target) {
          const Time room = span - needed;
          total = needed + (room > 0
                                ? static_cast<Time>(rng_below(
                                      rng,
                                      static_cast<std::uint64_t>(room) / 4 + 1))
                                : 0);
        } else {
          total = static_cast<Time>(
              rng_below(rng, static_cast<std::uint64_t>(needed)));
        }
        place_coverage(rng, intervals, rule.label1, lo, hi, total);
        break;
      }
    }

    ESequence seq(id, std::move(intervals));
    if (rule_holds(rule, seq) != target) {
      continue;  // float-boundary or construction slip: resample
    }
    std::string cls = target ? "pos" : "neg";
    if (rng_chance(rng, spec.noise)) {
      cls = cls == "pos" ? "neg" : "pos";
    }
    class_out = std::move(cls);
    return seq;
  }
  throw GenerationError("could not realize the planted rule for sequence '" +
                        id + "' after " + std::to_string(kSequenceAttempts) +
                        " attempts");
}

}  // namespace

bool rule_holds(const PlantedRule& rule, const ESequence& s) {
  switch (rule.kind) {
    case PlantedRule::Kind::presence:
      return first_occurrence(s, rule.label1) != nullptr;
    case PlantedRule::Kind::relation: {
      const EventInterval* a = first_occurrence(s, rule.label1);
      const EventInterval* b = first_occurrence(s, rule.label2);
      return a && b && allen_relation(*a, *b) == rule.relation;
    }
    case PlantedRule::Kind::frequency:
      return relative_frequency(s, rule.label1) >= rule.threshold;
  }
  throw Error("invalid rule kind");
}

std::vector<std::string> synth_alphabet(std::size_t size) {
  std::vector<std::string> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string label;
    std::size_t v = i;
    for (;;) {
      label.insert(label.begin(), static_cast<char>('A' + v % 26));
      if (v < 26) break;
      v = v / 26 - 1;
    }
    out.push_back(std::move(label));
  }
  return out;
}

void SynthSpec::validate() const {
  if (sequence_count < 2) {
    throw ParamError("sequence_count must be >= 2");
  }
  if (alphabet_size < 2) {
    throw ParamError("alphabet_size must be >= 2");
  }
  if (min_intervals < 1 || max_intervals < min_intervals) {
    throw ParamError("interval count range is empty");
  }
  if (horizon < 4) {
    throw ParamError("horizon must be >= 4");
  }
  if (!(noise >= 0.0 && noise < 1.0)) {
    throw ParamError("noise must be in [0, 1)");
  }
  const auto alphabet = synth_alphabet(alphabet_size);
  auto known = [&](const std::string& l) {
    return std::find(alphabet.begin(), alphabet.end(), l) != alphabet.end();
  };
  switch (rule.kind) {
    case PlantedRule::Kind::presence:
      if (!known(rule.label1)) {
        throw ParamError("rule label '" + rule.label1 +
                         "' is not in the alphabet");
      }
      break;
    case PlantedRule::Kind::relation: {
      std::string missing;
      if (!known(rule.label1)) missing = rule.label1;
      if (!known(rule.label2)) {
        missing += missing.empty() ? rule.label2 : ", " + rule.label2;
      }
      if (!missing.empty()) {
        throw ParamError("rule labels not in the alphabet: " + missing);
      }
      if (rule.label1 == rule.label2) {
        throw ParamError("relation rule needs two distinct labels");
      }
      if (rule.relation == Relation::none) {
        throw ParamError("relation rule must use one of the 13 relations");
      }
      break;
    }
    case PlantedRule::Kind::frequency:
      if (!known(rule.label1)) {
        throw ParamError("rule label '" + rule.label1 +
                         "' is not in the alphabet");
      }
      if (!(rule.threshold > 0.0 && rule.threshold < 1.0)) {
        throw ParamError("frequency threshold must be in (0, 1)");
      }
      break;
  }
}

Dataset generate(const SynthSpec& spec, int workers) {
  spec.validate();
  const auto alphabet = synth_alphabet(spec.alphabet_size);

  int width = 1;
  for (std::size_t v = spec.sequence_count; v >= 10; v /= 10) ++width;

  std::vector<ESequence> sequences;
  sequences.reserve(spec.sequence_count);
  std::vector<std::string> classes(spec.sequence_count);
  std::vector<std::optional<ESequence>> slots(spec.sequence_count);

  parallel_for(spec.sequence_count, workers, [&](std::size_t i) {
    std::string id = std::to_string(i + 1);
    id.insert(0, static_cast<std::size_t>(width) - std::min<std::size_t>(
                     static_cast<std::size_t>(width), id.size()),
              '0');
    id.insert(0, "s");
    const bool target = i % 2 == 0;
    slots[i] = generate_sequence(spec, alphabet, id, i, target, classes[i]);
  });

  for (auto& s : slots) sequences.push_back(std::move(*s));
  return Dataset(std::move(sequences), std::move(classes));
}

}  // namespace ibts
