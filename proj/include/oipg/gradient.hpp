#pragma once

#include "oipg/problem.hpp"
#include "oipg/rng.hpp"

namespace oipg {

enum class GradModel { Exact, BoundedNoise, ZerothOrder };

/// An inexact gradient together with the realized error norm. The error is
/// exact whenever the analytic gradient is available (all built-in costs);
/// error_measured is false only when it had to be left as unmeasured.
struct GradientEstimate {
  Vec estimate;
  double error_norm = 0.0;
  bool error_measured = true;
  GradModel model = GradModel::Exact;
};

/// Multi-point sphere-sampling estimator configuration: total_evaluations is
/// M (the center plus M-1 sphere points), radius is the smoothing radius s.
struct ZerothOrderConfig {
  int total_evaluations = 2;  // M >= 2
  double radius = 1e-2;       // s > 0
  bool antithetic = false;    // pair each direction with its negative

  void validate() const {
    if (total_evaluations < 2) {
      throw std::invalid_argument("zeroth-order: need at least two evaluations");
    }
    if (!(radius > 0)) throw std::invalid_argument("zeroth-order: radius must be positive");
    if (antithetic && (total_evaluations - 1) % 2 != 0) {
      throw std::invalid_argument("zeroth-order: antithetic pairing needs an even draw count");
    }
  }
};

GradientEstimate estimate_exact(const TimeVaryingProblem& p, int k, const Vec& x);

/// Analytic gradient plus noise sampled as a uniform sphere direction scaled
/// by a magnitude uniform on [0, level]; the realized norm is recorded.
GradientEstimate estimate_bounded_noise(const TimeVaryingProblem& p, int k,
                                        const Vec& x, double level, Rng& rng);

/// (n / (s (M-1))) * sum_i (g_k(x + s u_i) - g_k(x)) u_i with u_i uniform on
/// the unit sphere. Uses function values only; the error norm is measured
/// against the analytic gradient.
GradientEstimate estimate_zeroth_order(const TimeVaryingProblem& p, int k,
                                       const Vec& x, const ZerothOrderConfig& cfg,
                                       Rng& rng);

struct GradientOracleConfig {
  GradModel model = GradModel::Exact;
  double noise_level = 0.0;  // bounded-noise bound gamma_e
  ZerothOrderConfig zeroth_order;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (noise_level < 0) throw std::invalid_argument("gradient oracle: negative noise level");
    if (model == GradModel::ZerothOrder) zeroth_order.validate();
  }
};

GradientEstimate apply_gradient_oracle(const TimeVaryingProblem& p, int k,
                                       const Vec& x, const GradientOracleConfig& cfg,
                                       Rng& rng);

}  // namespace oipg
