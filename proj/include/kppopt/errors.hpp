#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kppopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Thrown when iteration caps are exhausted; keeps the best iterate seen.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> best_iterate,
                 double residual)
      : Error(what), best_iterate_(std::move(best_iterate)), residual_(residual) {}

  const std::vector<double>& best_iterate() const { return best_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

// Constant state: theta' has no isolated zeros.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

// A resource profile does not have exactly one jump between two critical
// points of the state.
class StructureViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace kppopt
