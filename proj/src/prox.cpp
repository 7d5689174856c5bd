#include "oipg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oipg {

namespace {

constexpr double kCertSlack = 1e-8;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

Vec prox_l1(const Vec& y, double threshold) {
  Vec x(y.size());
  for (int i = 0; i < y.size(); ++i) x[i] = soft_threshold(y[i], threshold);
  return x;
}

Vec prox_group(const Vec& y, const std::vector<Block>& blocks, double threshold) {
  Vec x = y;
  for (const auto& b : blocks) {
    const double norm = y.segment(b.offset, b.size).norm();
    const double scale = norm > threshold ? 1.0 - threshold / norm : 0.0;
    x.segment(b.offset, b.size) *= scale;
  }
  return x;
}

void check_lambda(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("prox: lambda must be positive");
}

}  // namespace

double prox_objective(const NonsmoothCost& h, double lambda, const Vec& y, const Vec& x) {
  check_lambda(lambda);
  const double hv = h.value(x);
  if (std::isinf(hv)) return hv;
  return hv + (x - y).squaredNorm() / (2.0 * lambda);
}

Vec prox_exact(const NonsmoothCost& h, double lambda, const Vec& y,
               const ProjectionParams& params) {
  check_lambda(lambda);
  switch (h.family) {
    case NonsmoothFamily::L1Norm:
      return prox_l1(y, lambda * h.weight);
    case NonsmoothFamily::GroupNorm:
      return prox_group(y, h.groups, lambda * h.weight);
    case NonsmoothFamily::BoxIndicator:
    case NonsmoothFamily::PolytopeIndicator:
      return h.feasible_set->project(y, params);
    case NonsmoothFamily::RegularizerPlusIndicator:
      // Separable in each coordinate: unconstrained soft threshold, then the
      // interval clamp of the univariate minimizer.
      if (h.feasible_set->kind() != SetKind::Box) {
        throw CapabilityError("prox_exact: only the l1 + box composite is supported");
      }
      return h.feasible_set->pull_inside(prox_l1(y, lambda * h.weight));
  }
  throw CapabilityError("prox_exact: unsupported family");
}

ProxResult prox_perturbed(const NonsmoothCost& h, double lambda, const Vec& y,
                          double eps, Rng& rng) {
  if (eps < 0) throw std::invalid_argument("prox_perturbed: eps must be nonnegative");
  const Vec exact = prox_exact(h, lambda, y);
  ProxResult result;
  result.eps_target = eps;
  if (eps == 0.0) {
    result.point = exact;
    result.residual_norm = 0.0;
    return result;
  }
  Vec r;
  if (h.has_indicator()) {
    // Move along the segment toward the anchor; both ends are feasible, so
    // the perturbed point is too.
    const Vec toward = h.feasible_set->interior_anchor() - exact;
    const double reach = toward.norm();
    const double len = std::min(rng.uniform(0.0, eps), reach);
    r = reach > 1e-300 ? Vec((len / reach) * toward) : Vec(Vec::Zero(y.size()));
  } else {
    r = rng.uniform(0.0, eps) * rng.unit_sphere(static_cast<int>(y.size()));
  }
  result.point = exact + r;
  result.residual_norm = r.norm();
  result.eps_certified = *result.residual_norm;
  const double gap = prox_objective(h, lambda, y, result.point) -
                     prox_objective(h, lambda, y, exact);
  result.eps_gap = std::sqrt(2.0 * lambda * std::max(0.0, gap));
  return result;
}

ProxResult project_inexact(const FeasibleSet& set, const Vec& y, double eps,
                           ProjectMode mode, double margin) {
  if (eps < 0) throw std::invalid_argument("project_inexact: eps must be nonnegative");
  ProxResult result;
  if (mode == ProjectMode::InteriorInexact) {
    const Vec exact = set.project(y);
    const double dist_sq = (exact - y).squaredNorm();
    if (dist_sq == 0.0) {  // already feasible: zero-distance projection
      result.point = y;
      result.eps_target = eps;
      return result;
    }
    const double budget = dist_sq + eps * eps;
    const Vec toward = set.interior_anchor() - exact;
    auto within = [&](double t) {
      return (exact + t * toward - y).squaredNorm() <= budget;
    };
    // The admissible steps form an interval containing t = 0; bisect for its
    // upper end.
    double t = 0.0;
    if (within(1.0)) {
      t = 1.0;
    } else {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (within(mid) ? lo : hi) = mid;
      }
      t = lo;
    }
    result.point = exact + t * toward;
    if (!within(t) || !set.contains(result.point)) {
      throw std::logic_error("project_inexact: interior step violated its certificate");
    }
    result.eps_target = eps;
    result.eps_certified = (result.point - exact).norm();
    result.eps_gap = std::sqrt(std::max(0.0, (result.point - y).squaredNorm() - dist_sq));
    return result;
  }

  // Restricted margin: exact projection onto the tightened set, certified
  // against the unshrunk projection.
  const FeasibleSet shrunk = set.shrink(margin);
  result.point = shrunk.project(y);
  const Vec exact = set.project(y);
  result.eps_certified = (result.point - exact).norm();
  result.eps_target = result.eps_certified;  // nothing was requested in this mode
  result.eps_gap = std::sqrt(std::max(0.0, (result.point - y).squaredNorm() -
                                               (exact - y).squaredNorm()));
  return result;
}

ProxResult prox_budgeted(const NonsmoothCost& h, double lambda, const Vec& y,
                         int inner_budget) {
  check_lambda(lambda);
  if (inner_budget < 0) throw std::invalid_argument("prox_budgeted: negative budget");
  ProxResult result;
  switch (h.family) {
    case NonsmoothFamily::GroupNorm: {
      // Cyclic exact block minimization. Blocks are disjoint, so the first
      // pass already lands on the minimizer and further passes are fixed
      // points; a zero budget returns the starting point untouched.
      result.point = inner_budget > 0 ? prox_group(y, h.groups, lambda * h.weight) : y;
      break;
    }
    case NonsmoothFamily::PolytopeIndicator: {
      const auto& set = *h.feasible_set;
      result.point = set.pull_inside(set.dykstra_passes(y, inner_budget));
      break;
    }
    default:
      throw CapabilityError(
          "prox_budgeted: supported families are group norms and polytope indicators");
  }
  ProjectionParams reference;
  reference.tol = 1e-12;
  reference.max_passes = 100000;
  const Vec exact = prox_exact(h, lambda, y, reference);
  result.eps_certified = (result.point - exact).norm();
  result.eps_target = result.eps_certified;
  const double gap = prox_objective(h, lambda, y, result.point) -
                     prox_objective(h, lambda, y, exact);
  result.eps_gap = std::isinf(gap) ? std::numeric_limits<double>::infinity()
                                   : std::sqrt(2.0 * lambda * std::max(0.0, gap));
  return result;
}

PrecisionCertificate certify_precision(const NonsmoothCost& h, double lambda,
                                       const Vec& y, const Vec& x) {
  ProjectionParams reference;
  reference.tol = 1e-12;
  reference.max_passes = 100000;
  const Vec exact = prox_exact(h, lambda, y, reference);
  PrecisionCertificate cert;
  cert.eps_certified = (x - exact).norm();
  const double phi_x = prox_objective(h, lambda, y, x);
  if (std::isinf(phi_x)) {
    cert.feasible = false;
    cert.eps_gap = std::numeric_limits<double>::infinity();
    cert.consistent = true;
    return cert;
  }
  const double gap = phi_x - prox_objective(h, lambda, y, exact);
  cert.eps_gap = std::sqrt(2.0 * lambda * std::max(0.0, gap));
  cert.consistent = cert.eps_certified <= cert.eps_gap + kCertSlack;
  return cert;
}

}  // namespace oipg
