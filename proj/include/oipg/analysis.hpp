#pragma once

#include "oipg/solver.hpp"

namespace oipg {

struct ReferenceParams {
  double tol = 1e-10;       // gradient-mapping stop, relative to 1 + ||x||
  long max_iterations = 1000000;
};

/// Per-time minimizer. Closed-form families return the analytic minimizer;
/// everything else runs an accelerated proximal-gradient loop (with adaptive
/// restart) until ||x - prox_{a h}(x - a grad g(x))|| / a <= tol * (1 + ||x||),
/// warm-started when a previous optimum is supplied.
Vec reference_optimum(const TimeVaryingProblem& p, int k, const ReferenceParams& params,
                      const Vec* warm_start = nullptr);

/// The solution path x_0^*..x_K^* and its drift aggregates. x_0^* is the
/// k = 1 optimum evaluated once up front, so the first drift entry is zero.
struct OptimaPath {
  std::vector<Vec> optima;              // index 0..K
  std::vector<double> drift;            // ||x_k^* - x_{k-1}^*||, k = 1..K
  std::vector<double> path_length;      // running sum of drift
  std::vector<double> path_length_sq;   // running sum of squared drift
  std::string method;                   // "closed-form" or "numerical(tol)"
};

/// Drift aggregates from a raw optimum sequence (index 0..K).
OptimaPath path_metrics(std::vector<Vec> optima, std::string method = "closed-form");

/// Full path for a problem, preferring the analytic minimizers and falling
/// back to warm-started numerical solves.
OptimaPath compute_optima_path(const TimeVaryingProblem& p,
                               const ReferenceParams& params = {});

/// Running error sums: gradient error norms, certified prox precisions, and
/// their squares. The gap-certified variants feed the convex regret bound.
struct ErrorAggregates {
  std::vector<double> grad_error;     // E_k
  std::vector<double> prox_eps;       // P_k (distance certificates)
  std::vector<double> prox_eps_sq;    // running sum of squares
  std::vector<double> prox_gap;       // gap-certificate running sum
  std::vector<double> prox_gap_sq;
};

ErrorAggregates error_aggregates(const RunTrace& trace);

struct TrackingSeries {
  std::vector<double> error;        // ||x_k - x_k^*||
  std::vector<double> running_avg;  // (1/k) sum of the above
};

TrackingSeries tracking_series(const RunTrace& trace, const OptimaPath& path);

/// Cumulative optimality gaps sum_{i<=k} f_i(x_i) - f_i(x_i^*). Throws when a
/// recorded iterate has an infinite objective (a feasibility violation
/// upstream).
std::vector<double> regret_series(const TimeVaryingProblem& p, const RunTrace& trace,
                                  const OptimaPath& path);

/// One measured-vs-bound comparison across the horizon.
struct BoundCheck {
  std::string name;
  bool applicable = false;
  std::string note;
  std::vector<double> lhs;          // per k
  std::vector<double> rhs;          // per k
  std::vector<bool> checked;        // per-k comparison enabled
  int violations = 0;
  double max_ratio = 0.0;           // max lhs/rhs over checked entries
  bool satisfied = true;            // no violations over checked entries

  void finalize();                  // fills violations/max_ratio/satisfied
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool all_applicable_satisfied() const;
  const BoundCheck* find(const std::string& name) const;
};

/// Tracking-error bounds:
///   step_tracking       per-step contraction inequality
///   unrolled_tracking   its recursion unrolled from ||x_0 - x_0^*||
///   cumulative_tracking sum of errors vs (rho d0 + rho path + P + alpha E)/(1-rho)
///   steady_state_tracking  tail errors vs (alpha g_e + g_eps + rho sigma)/(1-rho),
///                          checked on the second half of the horizon
/// The last two require strong convexity, alpha < 2/L and rho < 1.
BoundReport evaluate_tracking_bounds(const RunTrace& trace, const OptimaPath& path,
                                     const ProblemConstants& constants,
                                     double gamma_grad, double gamma_prox,
                                     double sigma_bound);

struct RegretBoundOptions {
  bool use_diameter_for_distances = false;  // replace measured distances by R
  std::vector<Vec> extra_subgradient_samples;
};

/// Regret bounds:
///   regret_strongly_convex  D/(1-rho) * (rho d0 + rho path + P + alpha E)
///   regret_convex_compact   the compact-set telescoping bound (requires
///                           alpha <= 1/sup L and a finite diameter); its
///                           prox-error terms use the gap certificates
/// D is the sample-based estimate over the trace iterates, the reference
/// optima and any extra samples (maxed with constants.subgradient_bound).
BoundReport evaluate_regret_bounds(const TimeVaryingProblem& p, const RunTrace& trace,
                                   const OptimaPath& path,
                                   const ProblemConstants& constants,
                                   const ErrorAggregates& aggregates,
                                   const RegretBoundOptions& options = {});

/// Measured run statistics for bound inputs and reports.
double measured_max_drift(const OptimaPath& path);
double measured_max_grad_error(const RunTrace& trace);
double measured_max_prox_eps(const RunTrace& trace);

/// (max - min) / |last| over the final quarter of a series; the plateau
/// indicator used in reports.
double final_quarter_relative_change(const std::vector<double>& series);

}  // namespace oipg
