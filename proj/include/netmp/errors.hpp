#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netmp {

/// Malformed edge-list input. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A message payload left its admissible domain (probability outside [0,1],
/// non-normalizable pair/simplex, non-finite complex value, singular update).
class NumericDomainError : public std::runtime_error {
 public:
  NumericDomainError(std::size_t edge, const std::string& what)
      : std::runtime_error("directed edge " + std::to_string(edge) + ": " + what), edge_(edge) {}
  std::size_t edge() const noexcept { return edge_; }

 private:
  std::size_t edge_;
};

/// An iterative solver that must converge (unlike message passing, which
/// reports non-convergence in-band) ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

}  // namespace netmp
