// Error hierarchy for the library. The C shim and the CLI map these to
// status codes; see include/subriem/subriem.h for the public values.
#pragma once

#include <stdexcept>
#include <string>

namespace subriem {

// Invalid arguments, malformed configs, points violating preconditions.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Geometric degeneracy: singular frames, points outside the working
// chart, indefinite metric where positive-definiteness is required.
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure that is not a blow-up: finite-difference step
// underflow, transport failure, non-convergence.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Trajectory blow-up. Carries the last time at which the state was
// still finite and within bounds.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double lastGoodTime)
      : std::runtime_error(what), lastGoodTime_(lastGoodTime) {}
  double lastGoodTime() const { return lastGoodTime_; }

 private:
  double lastGoodTime_;
};

}  // namespace subriem
