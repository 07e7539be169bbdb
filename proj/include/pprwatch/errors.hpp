#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pprwatch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected construction input (non-positive weight, bad parameter range).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// An edge event that cannot be applied to the current graph.
class InvalidEventError : public Error {
 public:
  InvalidEventError(std::size_t event_index, const std::string& what)
      : Error("event " + std::to_string(event_index) + ": " + what),
        event_index_(event_index) {}

  std::size_t event_index() const noexcept { return event_index_; }

 private:
  std::size_t event_index_;
};

// Malformed input file line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InternalInconsistencyError : public Error {
 public:
  using Error::Error;
};

class PushDivergenceError : public Error {
 public:
  using Error::Error;
};

class OracleTooLargeError : public Error {
 public:
  using Error::Error;
};

class IncompatibleEmbeddingError : public Error {
 public:
  using Error::Error;
};

}  // namespace pprwatch
