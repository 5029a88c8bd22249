#pragma once

#include <stdexcept>
#include <string>

namespace ibts {

// Base class for everything this library throws on bad input or bad state.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (wrong field count, unparsable number, unknown token).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A domain invariant does not hold (zero-length interval, overlapping
// same-label intervals, out-of-range cell value, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Two structures that must agree do not (ids without classes, selection
// report applied to a matrix from a different dataset, ...).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// A parameter is outside its documented range.
class ParamError : public Error {
 public:
  using Error::Error;
};

// A synthesis spec cannot be realized within its bounds.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// File/stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ibts
