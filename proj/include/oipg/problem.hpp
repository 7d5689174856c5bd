#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "oipg/feasible_set.hpp"
#include "oipg/rng.hpp"
#include "oipg/types.hpp"

namespace oipg {

/// Smooth component g_k: value and gradient closures plus declared curvature
/// constants. The constants are declared by the problem generators, never
/// estimated, and must satisfy 0 <= strong_convexity <= lipschitz.
struct SmoothCost {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  double lipschitz = 0.0;         // L_k
  double strong_convexity = 0.0;  // mu_k, 0 when merely convex
};

enum class NonsmoothFamily {
  L1Norm,
  GroupNorm,
  BoxIndicator,
  PolytopeIndicator,
  RegularizerPlusIndicator,  // supported combination: l1 + box
};

/// Contiguous block of coordinates [offset, offset + size).
struct Block {
  int offset = 0;
  int size = 0;
};

/// Nonsmooth component h_k. All supported families are structural, so the
/// value is computed from the fields; indicator families evaluate to +inf
/// off the feasible set.
struct NonsmoothCost {
  NonsmoothFamily family = NonsmoothFamily::L1Norm;
  double weight = 0.0;                 // regularizer scale
  std::vector<Block> groups;           // group-norm blocks
  std::optional<FeasibleSet> feasible_set;

  static NonsmoothCost zero() { return l1(0.0); }
  static NonsmoothCost l1(double weight);
  static NonsmoothCost group(double weight, std::vector<Block> blocks);
  static NonsmoothCost indicator(FeasibleSet set);
  static NonsmoothCost l1_over_box(double weight, FeasibleSet box);

  bool has_indicator() const { return feasible_set.has_value(); }
  double value(const Vec& x) const;
};

/// A finite-horizon sequence of composite costs sharing one dimension.
struct TimeVaryingProblem {
  int dimension = 0;
  int horizon = 0;                // K; costs are indexed k = 1..K
  double sampling_interval = 1.0; // metadata only
  std::vector<SmoothCost> smooth;
  std::vector<NonsmoothCost> nonsmooth;
  /// Closed-form per-k minimizer when the generating family has one and it
  /// is unique; the analysis layer falls back to a numerical solve otherwise.
  std::function<Vec(int)> analytic_optimum;
  std::vector<std::string> notes;  // generation log (clamps, repairs)

  const SmoothCost& g(int k) const;
  const NonsmoothCost& h(int k) const;
  double sup_lipschitz() const;
  double inf_lipschitz() const;
  double inf_strong_convexity() const;
};

/// f_k(x) = g_k(x) + h_k(x); +inf exactly when an indicator makes x infeasible.
double eval_objective(const TimeVaryingProblem& p, int k, const Vec& x);

/// Gradient of the smooth part; domain violations (e.g. a log argument going
/// nonpositive) surface as std::domain_error naming the offender.
Vec grad_smooth(const TimeVaryingProblem& p, int k, const Vec& x);

struct ContractionFactor {
  double rho = 0.0;
  bool contractive = false;  // rho < 1
};

/// rho_k = max{|1 - alpha*mu_k|, |1 - alpha*L_k|} for the step map
/// x - alpha*grad g_k(x).
ContractionFactor contraction_factor(double alpha, double mu_k, double lipschitz_k);

/// Horizon-wide constants consumed by the bound evaluators. D is estimated
/// from samples (max over points of ||grad g_k(x)|| plus the regularizer's
/// Lipschitz constant) and flagged as sample-based; R requires every cost to
/// carry a feasible set.
struct ProblemConstants {
  double alpha = 0.0;
  double lipschitz_sup = 0.0;     // L
  double lipschitz_inf = 0.0;
  double strong_convexity_inf = 0.0;  // mu
  double rho = 0.0;               // sup_k rho_k
  bool contractive = false;       // rho < 1
  std::vector<double> rho_k;      // per step, k = 1..K
  double diameter = 0.0;          // R
  bool diameter_valid = false;
  double subgradient_bound = 0.0; // D
  bool subgradient_bound_valid = false;
  bool subgradient_bound_sample_based = true;
};

ProblemConstants problem_constants(const TimeVaryingProblem& p, double alpha,
                                   const std::vector<Vec>& samples = {},
                                   bool want_diameter = false,
                                   bool want_subgradient_bound = false);

/// ||grad g_k(x)|| + Lip(h'_k): a per-point upper bound on the norm of a
/// valid subgradient of f_k at feasible x (the indicator contributes zero).
double subgradient_norm_bound(const TimeVaryingProblem& p, int k, const Vec& x);

/// Sampling-based spot checks of the declared structure; used by tests and
/// by the CLI's problem validation. Returns human-readable failures.
struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

ValidationReport validate_problem(const TimeVaryingProblem& p, Rng& rng,
                                  int pairs_per_cost = 8, int costs_checked = 8);

}  // namespace oipg
