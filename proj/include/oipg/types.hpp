#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace oipg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a configuration document is malformed or internally
/// inconsistent (unknown generator, missing seed, bad key value).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an operation is asked for something outside its supported
/// families or modes (e.g. the prox of an unsupported composite).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative scheme hits its iteration cap before reaching
/// the requested tolerance. Carries the residual it did achieve.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_residual(achieved) {}
  double achieved_residual;
};

inline void require_dimension(const Vec& x, int n, const char* where) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(where) + ": expected dimension " +
                                std::to_string(n) + ", got " +
                                std::to_string(x.size()));
  }
}

}  // namespace oipg
