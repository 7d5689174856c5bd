#include "oipg/solver.hpp"

#include <sstream>

namespace oipg {

void SolverConfig::validate() const {
  if (!(alpha > 0)) throw std::invalid_argument("solver: alpha must be positive");
  if (horizon < 0) throw std::invalid_argument("solver: negative horizon");
  gradient.validate();
  prox.validate();
  if (gradient.model == GradModel::ZerothOrder &&
      prox.mode == ProxMode::RestrictedMargin &&
      prox.margin < gradient.zeroth_order.radius) {
    throw std::invalid_argument(
        "solver: restricted margin must be at least the zeroth-order radius");
  }
}

namespace {

ProxResult apply_prox_oracle(const NonsmoothCost& h, double lambda, const Vec& y,
                             const ProxOracleConfig& cfg, int k, Rng& rng) {
  switch (cfg.mode) {
    case ProxMode::Exact: {
      ProxResult r;
      r.point = prox_exact(h, lambda, y);
      return r;
    }
    case ProxMode::Perturbed:
      return prox_perturbed(h, lambda, y, cfg.eps.at(k), rng);
    case ProxMode::InteriorInexact:
    case ProxMode::RestrictedMargin: {
      if (!h.has_indicator() || h.family == NonsmoothFamily::RegularizerPlusIndicator) {
        throw CapabilityError(
            "prox oracle: projection modes need a pure indicator nonsmooth part");
      }
      const auto mode = cfg.mode == ProxMode::InteriorInexact
                            ? ProjectMode::InteriorInexact
                            : ProjectMode::RestrictedMargin;
      return project_inexact(*h.feasible_set, y, cfg.eps.at(k), mode, cfg.margin);
    }
    case ProxMode::Budgeted:
      return prox_budgeted(h, lambda, y, cfg.inner_budget);
  }
  throw std::logic_error("apply_prox_oracle: unknown mode");
}

}  // namespace

StepRecord step(const TimeVaryingProblem& p, int k, const Vec& x_prev,
                const SolverConfig& config, Rng& grad_rng, Rng& prox_rng) {
  require_dimension(x_prev, p.dimension, "step");
  const auto t0 = std::chrono::steady_clock::now();
  StepRecord rec;
  rec.k = k;
  try {
    const GradientEstimate ge =
        apply_gradient_oracle(p, k, x_prev, config.gradient, grad_rng);
    rec.y = x_prev - config.alpha * ge.estimate;
    rec.grad_error_norm = ge.error_norm;
    const ProxResult pr =
        apply_prox_oracle(p.h(k), config.alpha, rec.y, config.prox, k, prox_rng);
    rec.x = pr.point;
    rec.eps = pr.eps_certified;
    rec.eps_gap = pr.eps_gap;
    rec.objective = eval_objective(p, k, rec.x);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "step k=" << k << ": " << e.what();
    throw std::runtime_error(os.str());
  }
  rec.wall_time = std::chrono::steady_clock::now() - t0;
  return rec;
}

Vec repaired_initial_point(const TimeVaryingProblem& p, Vec x0,
                           std::vector<std::string>* warnings) {
  require_dimension(x0, p.dimension, "run: x0");
  const auto& h1 = p.h(1);
  if (h1.has_indicator() && !h1.feasible_set->contains(x0)) {
    x0 = h1.feasible_set->project(x0);
    if (warnings != nullptr) {
      warnings->push_back("x0 was infeasible; repaired by exact projection");
    }
  }
  return x0;
}

RunTrace run(const TimeVaryingProblem& p, const SolverConfig& config) {
  config.validate();
  const int horizon = config.horizon > 0 ? config.horizon : p.horizon;
  if (horizon > p.horizon) {
    throw std::invalid_argument("run: horizon exceeds the problem's");
  }
  RunTrace trace;
  trace.config = config;
  trace.records.reserve(static_cast<size_t>(horizon));

  Vec x = repaired_initial_point(p, config.x0, &trace.warnings);
  trace.x0 = x;

  Rng grad_rng(Rng::mix(config.seed ^ config.gradient.rng_seed, 0xa11ce));
  Rng prox_rng(Rng::mix(config.seed ^ config.prox.rng_seed, 0xb0b));

  for (int k = 1; k <= horizon; ++k) {
    try {
      trace.records.push_back(step(p, k, x, config, grad_rng, prox_rng));
    } catch (const std::exception& e) {
      trace.error = RunError{k, e.what()};
      return trace;
    }
    x = trace.records.back().x;
  }
  return trace;
}

}  // namespace oipg
