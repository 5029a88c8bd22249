#pragma once

// The small worked-example dataset used across the test suites: four
// sequences over the alphabet {A,B,C,D,E,F}, three labeled "+" and one "-".

#include <string>
#include <vector>

#include "ibts/ingest.hpp"

namespace testsupport {

inline std::vector<ibts::ESequence> example_sequences() {
  using ibts::EventInterval;
  std::vector<ibts::ESequence> out;
  out.emplace_back("1", std::vector<EventInterval>{
                            {"A", 8, 28}, {"B", 18, 21}, {"C", 24, 28},
                            {"E", 25, 27}});
  out.emplace_back("2", std::vector<EventInterval>{
                            {"A", 1, 14}, {"C", 6, 14}, {"E", 8, 11},
                            {"F", 8, 11}});
  out.emplace_back("3", std::vector<EventInterval>{
                            {"A", 6, 22}, {"B", 6, 14}, {"C", 14, 20},
                            {"E", 16, 18}});
  out.emplace_back("4", std::vector<EventInterval>{
                            {"A", 4, 24}, {"B", 5, 10}, {"D", 5, 12},
                            {"C", 16, 22}, {"E", 18, 20}});
  return out;
}

inline ibts::Dataset example_dataset() {
  return ibts::Dataset(example_sequences(), {"+", "-", "+", "+"});
}

inline std::string example_events_csv() {
  return "sequence_id,label,begin,finish\n"
         "1,A,8,28\n1,B,18,21\n1,C,24,28\n1,E,25,27\n"
         "2,A,1,14\n2,C,6,14\n2,E,8,11\n2,F,8,11\n"
         "3,A,6,22\n3,B,6,14\n3,C,14,20\n3,E,16,18\n"
         "4,A,4,24\n4,B,5,10\n4,D,5,12\n4,C,16,22\n4,E,18,20\n";
}

inline std::string example_classes_csv() {
  return "sequence_id,class\n1,+\n2,-\n3,+\n4,+\n";
}

}  // namespace testsupport
