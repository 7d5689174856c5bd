#include "oipg/gradient.hpp"

namespace oipg {

GradientEstimate estimate_exact(const TimeVaryingProblem& p, int k, const Vec& x) {
  GradientEstimate e;
  e.estimate = grad_smooth(p, k, x);
  e.model = GradModel::Exact;
  return e;
}

GradientEstimate estimate_bounded_noise(const TimeVaryingProblem& p, int k,
                                        const Vec& x, double level, Rng& rng) {
  if (level < 0) throw std::invalid_argument("estimate_bounded_noise: negative level");
  GradientEstimate e;
  e.model = GradModel::BoundedNoise;
  const Vec grad = grad_smooth(p, k, x);
  if (level == 0.0) {
    e.estimate = grad;
    return e;
  }
  const Vec noise = rng.uniform(0.0, level) * rng.unit_sphere(p.dimension);
  e.estimate = grad + noise;
  e.error_norm = noise.norm();
  return e;
}

GradientEstimate estimate_zeroth_order(const TimeVaryingProblem& p, int k,
                                       const Vec& x, const ZerothOrderConfig& cfg,
                                       Rng& rng) {
  cfg.validate();
  require_dimension(x, p.dimension, "estimate_zeroth_order");
  const auto& gk = p.g(k);
  const int draws = cfg.total_evaluations - 1;
  const double center = gk.value(x);
  const double n = static_cast<double>(p.dimension);

  std::vector<Vec> directions;
  directions.reserve(static_cast<size_t>(draws));
  if (cfg.antithetic) {
    for (int i = 0; i < draws / 2; ++i) {
      Vec u = rng.unit_sphere(p.dimension);
      directions.push_back(u);
      directions.push_back(-u);
    }
  } else {
    for (int i = 0; i < draws; ++i) directions.push_back(rng.unit_sphere(p.dimension));
  }

  Vec sum = Vec::Zero(p.dimension);
  for (const Vec& u : directions) {
    sum += (gk.value(x + cfg.radius * u) - center) * u;
  }

  GradientEstimate e;
  e.model = GradModel::ZerothOrder;
  e.estimate = (n / (cfg.radius * static_cast<double>(draws))) * sum;
  e.error_norm = (e.estimate - gk.gradient(x)).norm();
  return e;
}

GradientEstimate apply_gradient_oracle(const TimeVaryingProblem& p, int k,
                                       const Vec& x, const GradientOracleConfig& cfg,
                                       Rng& rng) {
  switch (cfg.model) {
    case GradModel::Exact:
      return estimate_exact(p, k, x);
    case GradModel::BoundedNoise:
      return estimate_bounded_noise(p, k, x, cfg.noise_level, rng);
    case GradModel::ZerothOrder:
      return estimate_zeroth_order(p, k, x, cfg.zeroth_order, rng);
  }
  throw std::logic_error("apply_gradient_oracle: unknown model");
}

}  // namespace oipg
