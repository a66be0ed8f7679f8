#pragma once

#include <stdexcept>
#include <string>

namespace isoshock {

/// Input outside the mathematical domain of an operation (e.g. non-positive density).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solve exhausted its budget before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
  double bracket_lo;
  double bracket_hi;
};

/// A data object (grid, perturbation, config) violates its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point is outside the overflow-safe range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class FrontDetectionError : public std::runtime_error {
 public:
  FrontDetectionError(const std::string& what, int row_index)
      : std::runtime_error(what), row(row_index) {}
  int row;
};

/// Raised by the stepper when the field loses positivity, turns non-finite or
/// leaves the configured density bounds. Near the lifespan this is an expected
/// terminal outcome of a run rather than a programming error.
class BlowUpSuspected : public std::runtime_error {
 public:
  BlowUpSuspected(const std::string& what, int i_, int j_, double x_, double y_, double t_)
      : std::runtime_error(what), i(i_), j(j_), x(x_), y(y_), t(t_) {}
  int i, j;
  double x, y, t;
};

/// A lifespan-sweep driver failed for one epsilon.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, double eps) : std::runtime_error(what), epsilon(eps) {}
  double epsilon;
};

/// Config parse or validation failure; `key` and `line` locate the culprit
/// (line is 0 when the problem is not tied to one line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key_, int line_)
      : std::runtime_error(what), key(std::move(key_)), line(line_) {}
  std::string key;
  int line;
};

}  // namespace isoshock
