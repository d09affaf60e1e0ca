#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adrc {

// Malformed expression text. `position` is a 0-based byte offset into the source.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Arithmetic outside the domain of an operation (division by zero, unbound variable).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not produce an answer meeting its contract.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model or scenario data that violates a structural invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-loop simulation left the admissible region.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace adrc
