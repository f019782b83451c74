#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crossdiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameter values, malformed grids, unknown keys.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A state left the domain where the kinetics are defined (vanishing denominator).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A bisection was requested on an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The coexistence branch disappeared while it was being followed in p2.
class BranchLostError : public Error {
 public:
  BranchLostError(const std::string& what, double last_valid_p2)
      : Error(what), last_valid_p2_(last_valid_p2) {}
  double last_valid_p2() const noexcept { return last_valid_p2_; }

 private:
  double last_valid_p2_;
};

/// A time integrator produced a non-finite value.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time, std::size_t cell = 0)
      : Error(what), time_(time), cell_(cell) {}
  double time() const noexcept { return time_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  double time_;
  std::size_t cell_;
};

/// A concentration dropped below the negativity floor under the abort policy.
class NegativityError : public Error {
 public:
  NegativityError(const std::string& what, double time, std::size_t cell)
      : Error(what), time_(time), cell_(cell) {}
  double time() const noexcept { return time_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  double time_;
  std::size_t cell_;
};

}  // namespace crossdiff
