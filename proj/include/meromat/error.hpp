#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meromat {

// Bad input: malformed text, wrong dimensions, violated preconditions.
// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A well-formed request the algorithms could not complete (contour too close
// to a zero, quadrature did not converge, ambiguous numeric rank). Exit code 1.
class AnalysisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public InputError {
public:
  using InputError::InputError;
};

class NotCoprimeError : public InputError {
public:
  using InputError::InputError;
};

class RankDeficientError : public InputError {
public:
  using InputError::InputError;
};

class ParseError : public InputError {
public:
  ParseError(std::size_t offset, const std::string &what)
      : InputError("at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class ContourProximityError : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class ConvergenceError : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class RankAmbiguityError : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

} // namespace meromat
