#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mapf {

// Malformed .map / .scen input. Line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An agent cannot reach its goal under the requested bounds.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A satisfying assignment did not decode into a path. Always an encoder bug.
class EncodingFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The SAT backend failed for a reason other than UNSAT.
class SatBackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mapf
