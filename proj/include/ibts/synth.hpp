#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibts/ingest.hpp"

namespace ibts {

// A class-determining rule planted into generated data.
struct PlantedRule {
  enum class Kind { presence, relation, frequency };
  Kind kind = Kind::presence;
  std::string label1;          // all kinds
  std::string label2;          // relation
  Relation relation = Relation::overlaps;  // relation; any of the 13
  double threshold = 0.5;      // frequency; in (0,1)
};

// Evaluates the rule on raw intervals: presence of label1 / the relation of
// label1's first occurrence relative to label2's / relative frequency of
// label1 >= threshold.
bool rule_holds(const PlantedRule& rule, const ESequence& s);

struct SynthSpec {
  std::size_t sequence_count = 200;
  std::size_t alphabet_size = 6;
  std::size_t min_intervals = 4;   // base intervals per sequence (planted
  std::size_t max_intervals = 10;  // intervals come on top)
  Time horizon = 200;              // all times fall in [0, horizon]
  PlantedRule rule;
  double noise = 0.0;              // class flip probability, in [0, 1)
  std::uint64_t seed = 0;

  void validate() const;
};

// Alphabet labels A..Z, AA, AB, ... for a given size.
std::vector<std::string> synth_alphabet(std::size_t size);

// Generates a valid dataset: classes are "pos" where the planted rule holds
// and "neg" where it does not (exactly half the sequences each way, by
// construction), then flipped with probability `noise`. Deterministic given
// spec + seed, regardless of worker count.
Dataset generate(const SynthSpec& spec, int workers = 1);

}  // namespace ibts
