#include "oipg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oipg {

namespace {

constexpr double kBoundSlack = 1e-9;  // relative tolerance for bound checks

bool bound_holds(double lhs, double rhs) {
  return lhs <= rhs + kBoundSlack * (1.0 + std::abs(rhs));
}

}  // namespace

Vec reference_optimum(const TimeVaryingProblem& p, int k, const ReferenceParams& params,
                      const Vec* warm_start) {
  if (p.analytic_optimum) return p.analytic_optimum(k);

  const auto& gk = p.g(k);
  const auto& hk = p.h(k);
  const double step = 1.0 / gk.lipschitz;

  Vec x;
  if (warm_start != nullptr) {
    x = *warm_start;
  } else if (hk.has_indicator()) {
    x = hk.feasible_set->interior_anchor();
  } else {
    x = Vec::Zero(p.dimension);
  }
  if (hk.has_indicator() && !hk.feasible_set->contains(x)) {
    x = hk.feasible_set->project(x);
  }

  ProjectionParams prox_params;
  prox_params.tol = std::min(1e-10, params.tol * 1e-2);
  prox_params.max_passes = 100000;

  auto forward_backward = [&](const Vec& point) {
    return prox_exact(hk, step, point - step * gk.gradient(point), prox_params);
  };

  Vec z = x;
  double momentum = 1.0;
  double residual = std::numeric_limits<double>::infinity();
  for (long it = 0; it < params.max_iterations; ++it) {
    Vec x_next;
    try {
      x_next = forward_backward(z);
    } catch (const std::domain_error&) {
      // The extrapolation left the domain of g; restart the momentum.
      z = x;
      momentum = 1.0;
      x_next = forward_backward(z);
    }

    const Vec mapped = forward_backward(x_next);
    residual = (x_next - mapped).norm() / step;
    if (residual <= params.tol * (1.0 + x_next.norm())) {
      return x_next;
    }

    // Accelerated update with gradient-based adaptive restart.
    if ((z - x_next).dot(x_next - x) > 0) {
      momentum = 1.0;
      z = x_next;
    } else {
      const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      z = x_next + ((momentum - 1.0) / momentum_next) * (x_next - x);
      momentum = momentum_next;
    }
    x = x_next;
  }
  throw ConvergenceError("reference_optimum: iteration cap reached", residual);
}

OptimaPath path_metrics(std::vector<Vec> optima, std::string method) {
  if (optima.empty()) throw std::invalid_argument("path_metrics: empty sequence");
  const auto n = optima.front().size();
  for (const auto& v : optima) {
    if (v.size() != n) throw std::invalid_argument("path_metrics: dimension mismatch");
  }
  OptimaPath path;
  path.method = std::move(method);
  path.optima = std::move(optima);
  const size_t steps = path.optima.size() - 1;
  path.drift.reserve(steps);
  path.path_length.reserve(steps);
  path.path_length_sq.reserve(steps);
  double sum = 0.0, sum_sq = 0.0;
  for (size_t i = 1; i < path.optima.size(); ++i) {
    const double d = (path.optima[i] - path.optima[i - 1]).norm();
    path.drift.push_back(d);
    sum += d;
    sum_sq += d * d;
    path.path_length.push_back(sum);
    path.path_length_sq.push_back(sum_sq);
  }
  return path;
}

OptimaPath compute_optima_path(const TimeVaryingProblem& p, const ReferenceParams& params) {
  std::vector<Vec> optima;
  optima.reserve(static_cast<size_t>(p.horizon) + 1);
  std::string method = "closed-form";
  if (p.analytic_optimum) {
    optima.push_back(p.analytic_optimum(1));
    for (int k = 1; k <= p.horizon; ++k) optima.push_back(p.analytic_optimum(k));
  } else {
    std::ostringstream os;
    os << "numerical(tol=" << params.tol << ")";
    method = os.str();
    Vec current = reference_optimum(p, 1, params);
    optima.push_back(current);
    optima.push_back(current);
    for (int k = 2; k <= p.horizon; ++k) {
      current = reference_optimum(p, k, params, &current);
      optima.push_back(current);
    }
  }
  return path_metrics(std::move(optima), std::move(method));
}

ErrorAggregates error_aggregates(const RunTrace& trace) {
  if (trace.records.empty()) throw std::invalid_argument("error_aggregates: empty trace");
  ErrorAggregates agg;
  const size_t n = trace.records.size();
  agg.grad_error.reserve(n);
  agg.prox_eps.reserve(n);
  agg.prox_eps_sq.reserve(n);
  agg.prox_gap.reserve(n);
  agg.prox_gap_sq.reserve(n);
  double e = 0, pe = 0, pe2 = 0, pg = 0, pg2 = 0;
  for (const auto& rec : trace.records) {
    e += rec.grad_error_norm;
    pe += rec.eps;
    pe2 += rec.eps * rec.eps;
    pg += rec.eps_gap;
    pg2 += rec.eps_gap * rec.eps_gap;
    agg.grad_error.push_back(e);
    agg.prox_eps.push_back(pe);
    agg.prox_eps_sq.push_back(pe2);
    agg.prox_gap.push_back(pg);
    agg.prox_gap_sq.push_back(pg2);
  }
  return agg;
}

namespace {

void check_alignment(const RunTrace& trace, const OptimaPath& path, const char* where) {
  if (trace.records.size() + 1 != path.optima.size()) {
    throw std::invalid_argument(std::string(where) +
                                ": trace and optimum path lengths disagree");
  }
}

}  // namespace

TrackingSeries tracking_series(const RunTrace& trace, const OptimaPath& path) {
  check_alignment(trace, path, "tracking_series");
  TrackingSeries series;
  const size_t n = trace.records.size();
  series.error.reserve(n);
  series.running_avg.reserve(n);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double err = (trace.records[i].x - path.optima[i + 1]).norm();
    sum += err;
    series.error.push_back(err);
    series.running_avg.push_back(sum / static_cast<double>(i + 1));
  }
  return series;
}

std::vector<double> regret_series(const TimeVaryingProblem& p, const RunTrace& trace,
                                  const OptimaPath& path) {
  check_alignment(trace, path, "regret_series");
  std::vector<double> regret;
  regret.reserve(trace.records.size());
  double sum = 0.0;
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const int k = trace.records[i].k;
    const double f_iterate = trace.records[i].objective;
    if (!std::isfinite(f_iterate)) {
      throw std::runtime_error("regret_series: infinite objective at step " +
                               std::to_string(k));
    }
    sum += f_iterate - eval_objective(p, k, path.optima[i + 1]);
    regret.push_back(sum);
  }
  return regret;
}

void BoundCheck::finalize() {
  violations = 0;
  max_ratio = 0.0;
  for (size_t i = 0; i < lhs.size(); ++i) {
    if (!checked.empty() && !checked[i]) continue;
    if (!bound_holds(lhs[i], rhs[i])) ++violations;
    if (rhs[i] > 0) max_ratio = std::max(max_ratio, lhs[i] / rhs[i]);
  }
  satisfied = violations == 0;
}

bool BoundReport::all_applicable_satisfied() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return !c.applicable || c.satisfied; });
}

const BoundCheck* BoundReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

BoundReport evaluate_tracking_bounds(const RunTrace& trace, const OptimaPath& path,
                                     const ProblemConstants& constants,
                                     double gamma_grad, double gamma_prox,
                                     double sigma_bound) {
  check_alignment(trace, path, "evaluate_tracking_bounds");
  const size_t n = trace.records.size();
  const double alpha = constants.alpha;
  const TrackingSeries series = tracking_series(trace, path);
  const double d0 = (trace.x0 - path.optima[0]).norm();

  BoundReport report;

  // Per-step contraction inequality, with the measured previous error.
  {
    BoundCheck c;
    c.name = "step_tracking";
    c.applicable = true;
    c.lhs = series.error;
    c.rhs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const double prev = i == 0 ? d0 : series.error[i - 1];
      const double rho_k = constants.rho_k[i];
      c.rhs.push_back(rho_k * prev + rho_k * path.drift[i] +
                      alpha * trace.records[i].grad_error_norm + trace.records[i].eps);
    }
    c.finalize();
    report.checks.push_back(std::move(c));
  }

  // The same inequality unrolled from ||x_0 - x_0^*|| (products of the
  // per-step factors, accumulated incrementally).
  {
    BoundCheck c;
    c.name = "unrolled_tracking";
    c.applicable = true;
    c.lhs = series.error;
    c.rhs.reserve(n);
    double bound = d0;
    for (size_t i = 0; i < n; ++i) {
      const double rho_k = constants.rho_k[i];
      bound = rho_k * bound + rho_k * path.drift[i] +
              alpha * trace.records[i].grad_error_norm + trace.records[i].eps;
      c.rhs.push_back(bound);
    }
    c.finalize();
    report.checks.push_back(std::move(c));
  }

  const bool strongly_convex = constants.strong_convexity_inf > 0;
  const bool step_ok = alpha < 2.0 / constants.lipschitz_sup;
  const bool contractive = constants.contractive;
  std::string gate_note;
  if (!strongly_convex) gate_note = "not applicable: no strong convexity";
  else if (!step_ok) gate_note = "not applicable: alpha >= 2/L";
  else if (!contractive) gate_note = "not applicable: rho >= 1";

  const ErrorAggregates agg = error_aggregates(trace);

  // Cumulative tracking error.
  {
    BoundCheck c;
    c.name = "cumulative_tracking";
    c.applicable = strongly_convex && step_ok && contractive;
    c.note = gate_note;
    if (c.applicable) {
      const double rho = constants.rho;
      c.lhs.reserve(n);
      c.rhs.reserve(n);
      double cumulative = 0.0;
      for (size_t i = 0; i < n; ++i) {
        cumulative += series.error[i];
        c.lhs.push_back(cumulative);
        c.rhs.push_back((rho * d0 + rho * path.path_length[i] + agg.prox_eps[i] +
                         alpha * agg.grad_error[i]) /
                        (1.0 - rho));
      }
      c.finalize();
    }
    report.checks.push_back(std::move(c));
  }

  // Steady-state tracking error. The per-k value keeps the geometric
  // transient, so the comparison is valid at every k; the transient dies off
  // and leaves the asymptotic level.
  {
    BoundCheck c;
    c.name = "steady_state_tracking";
    c.applicable = strongly_convex && step_ok && contractive;
    c.note = gate_note;
    if (c.applicable) {
      const double rho = constants.rho;
      const double asymptote =
          (alpha * gamma_grad + gamma_prox + rho * sigma_bound) / (1.0 - rho);
      c.lhs = series.error;
      c.rhs.reserve(n);
      double decay = 1.0;
      for (size_t i = 0; i < n; ++i) {
        decay *= rho;
        c.rhs.push_back(decay * d0 + (1.0 - decay) * asymptote);
      }
      c.finalize();
    }
    report.checks.push_back(std::move(c));
  }

  return report;
}

BoundReport evaluate_regret_bounds(const TimeVaryingProblem& p, const RunTrace& trace,
                                   const OptimaPath& path,
                                   const ProblemConstants& constants,
                                   const ErrorAggregates& aggregates,
                                   const RegretBoundOptions& options) {
  check_alignment(trace, path, "evaluate_regret_bounds");
  const size_t n = trace.records.size();
  const double alpha = constants.alpha;
  const std::vector<double> regret = regret_series(p, trace, path);
  const TrackingSeries series = tracking_series(trace, path);
  const double d0 = (trace.x0 - path.optima[0]).norm();

  BoundReport report;

  // Strongly convex regret via the cumulative tracking bound and a
  // sample-based subgradient norm bound.
  {
    BoundCheck c;
    c.name = "regret_strongly_convex";
    const bool strongly_convex = constants.strong_convexity_inf > 0;
    const bool step_ok = alpha < 2.0 / constants.lipschitz_sup;
    c.applicable = strongly_convex && step_ok && constants.contractive;
    if (!c.applicable) {
      c.note = !strongly_convex ? "not applicable: no strong convexity"
                                : "not applicable: alpha >= 2/L or rho >= 1";
    } else {
      double d_bound = constants.subgradient_bound_valid ? constants.subgradient_bound : 0.0;
      for (size_t i = 0; i < n; ++i) {
        d_bound = std::max(d_bound,
                           subgradient_norm_bound(p, trace.records[i].k, trace.records[i].x));
        d_bound = std::max(d_bound, subgradient_norm_bound(p, trace.records[i].k,
                                                           path.optima[i + 1]));
      }
      for (const auto& s : options.extra_subgradient_samples) {
        for (size_t i = 0; i < n; ++i) {
          d_bound = std::max(d_bound, subgradient_norm_bound(p, trace.records[i].k, s));
        }
      }
      c.note = "subgradient bound is sample-based (trace iterates, optima, extras)";
      const double rho = constants.rho;
      c.lhs = regret;
      c.rhs.reserve(n);
      for (size_t i = 0; i < n; ++i) {
        c.rhs.push_back(d_bound / (1.0 - rho) *
                        (rho * d0 + rho * path.path_length[i] + aggregates.prox_eps[i] +
                         alpha * aggregates.grad_error[i]));
      }
      c.finalize();
    }
    report.checks.push_back(std::move(c));
  }

  // Convex regret over compact sets. Prox-error terms use the gap
  // certificates (the inexactness level the telescoping argument consumes).
  {
    BoundCheck c;
    c.name = "regret_convex_compact";
    const bool has_diameter = constants.diameter_valid;
    const bool step_ok = alpha <= (1.0 / constants.lipschitz_sup) * (1.0 + 1e-12);
    c.applicable = has_diameter && step_ok;
    if (!c.applicable) {
      c.note = !has_diameter ? "not applicable: no finite diameter"
                             : "not applicable: alpha > 1/sup L";
    } else {
      const double big_r = constants.diameter;
      const double beta = 1.0 / alpha - constants.lipschitz_inf;
      if (options.use_diameter_for_distances) c.note = "iterate distances bounded by R";
      c.lhs = regret;
      c.rhs.reserve(n);
      double drift_term = 0.0;
      double error_term = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double prev_dist = options.use_diameter_for_distances
                                     ? big_r
                                     : (i == 0 ? d0 : series.error[i - 1]);
        const double dist = options.use_diameter_for_distances ? big_r : series.error[i];
        drift_term += path.drift[i] * (prev_dist / alpha + beta * big_r);
        error_term +=
            (trace.records[i].eps_gap + alpha * trace.records[i].grad_error_norm) * dist;
        const double k_count = static_cast<double>(i + 1);
        c.rhs.push_back(d0 * d0 / (2.0 * alpha) + path.path_length_sq[i] / (2.0 * alpha) +
                        aggregates.prox_gap_sq[i] / (2.0 * alpha) + drift_term +
                        k_count * beta * big_r * big_r + error_term / alpha);
      }
      c.finalize();
    }
    report.checks.push_back(std::move(c));
  }

  return report;
}

double measured_max_drift(const OptimaPath& path) {
  double v = 0.0;
  for (double d : path.drift) v = std::max(v, d);
  return v;
}

double measured_max_grad_error(const RunTrace& trace) {
  double v = 0.0;
  for (const auto& r : trace.records) v = std::max(v, r.grad_error_norm);
  return v;
}

double measured_max_prox_eps(const RunTrace& trace) {
  double v = 0.0;
  for (const auto& r : trace.records) v = std::max(v, r.eps);
  return v;
}

double final_quarter_relative_change(const std::vector<double>& series) {
  if (series.size() < 4) return 0.0;
  const size_t start = series.size() - series.size() / 4;
  double lo = series[start], hi = series[start];
  for (size_t i = start; i < series.size(); ++i) {
    lo = std::min(lo, series[i]);
    hi = std::max(hi, series[i]);
  }
  const double scale = std::max(std::abs(series.back()), 1e-300);
  return (hi - lo) / scale;
}

}  // namespace oipg
