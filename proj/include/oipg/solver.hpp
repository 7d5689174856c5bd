#pragma once

#include <chrono>
#include <optional>

#include "oipg/gradient.hpp"
#include "oipg/prox.hpp"

namespace oipg {

/// One online pass per time index: a gradient estimate, the forward step
/// y_k = x_{k-1} - alpha * estimate, and one inexact prox with lambda = alpha.
/// lambda is deliberately not configurable.
struct SolverConfig {
  double alpha = 0.0;
  int horizon = 0;  // 0 means the problem's full horizon
  GradientOracleConfig gradient;
  ProxOracleConfig prox;
  Vec x0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct StepRecord {
  int k = 0;
  Vec x;         // x_k
  Vec y;         // y_k
  double grad_error_norm = 0.0;  // ||e_k||
  double eps = 0.0;              // certified distance precision of the prox step
  double eps_gap = 0.0;          // objective-gap certificate of the same step
  double objective = 0.0;        // f_k(x_k)
  std::chrono::duration<double> wall_time{0.0};
};

struct RunError {
  int k = 0;
  std::string message;
};

struct RunTrace {
  SolverConfig config;
  Vec x0;  // after any feasibility repair
  std::vector<StepRecord> records;
  std::vector<std::string> warnings;
  std::optional<RunError> error;
  std::string rng_algorithm = "mt19937_64+boxmuller";
};

/// One step of the loop. Oracle errors propagate with the step index attached.
StepRecord step(const TimeVaryingProblem& p, int k, const Vec& x_prev,
                const SolverConfig& config, Rng& grad_rng, Rng& prox_rng);

/// Runs the full horizon. An infeasible x0 is repaired by one exact
/// projection (logged). A step failure aborts and returns the partial trace
/// with the error recorded instead of throwing.
RunTrace run(const TimeVaryingProblem& p, const SolverConfig& config);

/// The starting point run() actually uses: x0, projected onto the first
/// feasible set when it starts infeasible (with a warning appended).
Vec repaired_initial_point(const TimeVaryingProblem& p, Vec x0,
                           std::vector<std::string>* warnings = nullptr);

}  // namespace oipg
