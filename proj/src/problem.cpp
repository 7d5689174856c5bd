#include "oipg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oipg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NonsmoothCost NonsmoothCost::l1(double weight) {
  if (weight < 0) throw std::invalid_argument("l1: weight must be nonnegative");
  NonsmoothCost h;
  h.family = NonsmoothFamily::L1Norm;
  h.weight = weight;
  return h;
}

NonsmoothCost NonsmoothCost::group(double weight, std::vector<Block> blocks) {
  if (weight < 0) throw std::invalid_argument("group: weight must be nonnegative");
  if (blocks.empty()) throw std::invalid_argument("group: needs at least one block");
  for (const auto& b : blocks) {
    if (b.offset < 0 || b.size <= 0) throw std::invalid_argument("group: bad block");
  }
  NonsmoothCost h;
  h.family = NonsmoothFamily::GroupNorm;
  h.weight = weight;
  h.groups = std::move(blocks);
  return h;
}

NonsmoothCost NonsmoothCost::indicator(FeasibleSet set) {
  NonsmoothCost h;
  h.family = set.kind() == SetKind::Box ? NonsmoothFamily::BoxIndicator
                                        : NonsmoothFamily::PolytopeIndicator;
  if (set.kind() == SetKind::Ball) {
    throw CapabilityError("indicator: ball sets are not a supported prox family");
  }
  h.feasible_set = std::move(set);
  return h;
}

NonsmoothCost NonsmoothCost::l1_over_box(double weight, FeasibleSet box) {
  if (box.kind() != SetKind::Box) {
    throw CapabilityError("l1_over_box: indicator part must be a box");
  }
  NonsmoothCost h = l1(weight);
  h.family = NonsmoothFamily::RegularizerPlusIndicator;
  h.feasible_set = std::move(box);
  return h;
}

double NonsmoothCost::value(const Vec& x) const {
  if (feasible_set && !feasible_set->contains(x)) return kInf;
  switch (family) {
    case NonsmoothFamily::L1Norm:
    case NonsmoothFamily::RegularizerPlusIndicator:
      return weight * x.lpNorm<1>();
    case NonsmoothFamily::GroupNorm: {
      double v = 0.0;
      for (const auto& b : groups) v += x.segment(b.offset, b.size).norm();
      return weight * v;
    }
    case NonsmoothFamily::BoxIndicator:
    case NonsmoothFamily::PolytopeIndicator:
      return 0.0;
  }
  return 0.0;
}

const SmoothCost& TimeVaryingProblem::g(int k) const {
  if (k < 1 || k > horizon) {
    throw std::out_of_range("time index " + std::to_string(k) + " outside 1.." +
                            std::to_string(horizon));
  }
  return smooth[static_cast<size_t>(k - 1)];
}

const NonsmoothCost& TimeVaryingProblem::h(int k) const {
  if (k < 1 || k > horizon) {
    throw std::out_of_range("time index " + std::to_string(k) + " outside 1.." +
                            std::to_string(horizon));
  }
  return nonsmooth[static_cast<size_t>(k - 1)];
}

double TimeVaryingProblem::sup_lipschitz() const {
  double v = 0.0;
  for (const auto& c : smooth) v = std::max(v, c.lipschitz);
  return v;
}

double TimeVaryingProblem::inf_lipschitz() const {
  double v = kInf;
  for (const auto& c : smooth) v = std::min(v, c.lipschitz);
  return v;
}

double TimeVaryingProblem::inf_strong_convexity() const {
  double v = kInf;
  for (const auto& c : smooth) v = std::min(v, c.strong_convexity);
  return v;
}

double eval_objective(const TimeVaryingProblem& p, int k, const Vec& x) {
  require_dimension(x, p.dimension, "eval_objective");
  const auto& gk = p.g(k);
  const auto& hk = p.h(k);
  const double hv = hk.value(x);
  if (std::isinf(hv)) return kInf;
  return gk.value(x) + hv;
}

Vec grad_smooth(const TimeVaryingProblem& p, int k, const Vec& x) {
  require_dimension(x, p.dimension, "grad_smooth");
  return p.g(k).gradient(x);
}

ContractionFactor contraction_factor(double alpha, double mu_k, double lipschitz_k) {
  if (!(alpha > 0)) throw std::invalid_argument("contraction_factor: alpha must be positive");
  if (mu_k < 0 || mu_k > lipschitz_k) {
    throw std::invalid_argument("contraction_factor: need 0 <= mu_k <= L_k");
  }
  ContractionFactor f;
  f.rho = std::max(std::abs(1.0 - alpha * mu_k), std::abs(1.0 - alpha * lipschitz_k));
  f.contractive = f.rho < 1.0;
  return f;
}

double subgradient_norm_bound(const TimeVaryingProblem& p, int k, const Vec& x) {
  const auto& hk = p.h(k);
  double reg_lipschitz = 0.0;
  switch (hk.family) {
    case NonsmoothFamily::L1Norm:
    case NonsmoothFamily::RegularizerPlusIndicator:
      reg_lipschitz = hk.weight * std::sqrt(static_cast<double>(p.dimension));
      break;
    case NonsmoothFamily::GroupNorm:
      reg_lipschitz = hk.weight * std::sqrt(static_cast<double>(hk.groups.size()));
      break;
    case NonsmoothFamily::BoxIndicator:
    case NonsmoothFamily::PolytopeIndicator:
      break;
  }
  return grad_smooth(p, k, x).norm() + reg_lipschitz;
}

ProblemConstants problem_constants(const TimeVaryingProblem& p, double alpha,
                                   const std::vector<Vec>& samples,
                                   bool want_diameter,
                                   bool want_subgradient_bound) {
  if (p.horizon < 1 || p.smooth.empty()) {
    throw std::invalid_argument("problem_constants: empty problem");
  }
  ProblemConstants c;
  c.alpha = alpha;
  c.lipschitz_sup = p.sup_lipschitz();
  c.lipschitz_inf = p.inf_lipschitz();
  c.strong_convexity_inf = p.inf_strong_convexity();
  c.rho_k.reserve(static_cast<size_t>(p.horizon));
  double rho = 0.0;
  for (int k = 1; k <= p.horizon; ++k) {
    const auto& gk = p.g(k);
    const auto f = contraction_factor(alpha, gk.strong_convexity, gk.lipschitz);
    c.rho_k.push_back(f.rho);
    rho = std::max(rho, f.rho);
  }
  c.rho = rho;
  c.contractive = rho < 1.0;

  const bool all_sets = std::all_of(p.nonsmooth.begin(), p.nonsmooth.end(),
                                    [](const NonsmoothCost& h) { return h.has_indicator(); });
  if (want_diameter) {
    if (!all_sets) {
      throw CapabilityError("problem_constants: diameter requested without feasible sets");
    }
    double r = 0.0;
    for (const auto& h : p.nonsmooth) r = std::max(r, h.feasible_set->diameter());
    c.diameter = r;
    c.diameter_valid = true;
  }
  if (want_subgradient_bound) {
    if (samples.empty()) {
      throw CapabilityError("problem_constants: subgradient bound requested without samples");
    }
    double d = 0.0;
    for (int k = 1; k <= p.horizon; ++k) {
      for (const auto& x : samples) {
        d = std::max(d, subgradient_norm_bound(p, k, x));
      }
    }
    c.subgradient_bound = d;
    c.subgradient_bound_valid = true;
  }
  return c;
}

namespace {

Vec central_difference(const SmoothCost& g, const Vec& x) {
  Vec fd(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double step = 1e-6 * (1.0 + std::abs(x[i]));
    Vec hi = x, lo = x;
    hi[i] += step;
    lo[i] -= step;
    fd[i] = (g.value(hi) - g.value(lo)) / (2.0 * step);
  }
  return fd;
}

Vec sample_domain_point(const TimeVaryingProblem& p, int k, Rng& rng) {
  const auto& hk = p.h(k);
  if (hk.has_indicator()) return hk.feasible_set->sample(rng);
  Vec x(p.dimension);
  for (int i = 0; i < p.dimension; ++i) x[i] = rng.uniform(-2.0, 2.0);
  return x;
}

}  // namespace

ValidationReport validate_problem(const TimeVaryingProblem& p, Rng& rng,
                                  int pairs_per_cost, int costs_checked) {
  ValidationReport report;
  auto fail = [&](int k, const std::string& msg) {
    std::ostringstream os;
    os << "k=" << k << ": " << msg;
    report.failures.push_back(os.str());
  };

  const int stride = std::max(1, p.horizon / std::max(1, costs_checked));
  for (int k = 1; k <= p.horizon; k += stride) {
    const auto& gk = p.g(k);
    if (gk.strong_convexity < 0 || gk.strong_convexity > gk.lipschitz) {
      fail(k, "declared curvature violates 0 <= mu <= L");
      continue;
    }
    for (int t = 0; t < pairs_per_cost; ++t) {
      const Vec x = sample_domain_point(p, k, rng);
      const Vec y = sample_domain_point(p, k, rng);
      const Vec gx = gk.gradient(x);
      const Vec gy = gk.gradient(y);
      const double dist = (x - y).norm();
      if (dist < 1e-12) continue;
      const double grad_gap = (gx - gy).norm();
      if (grad_gap > gk.lipschitz * dist * (1.0 + 1e-9)) {
        fail(k, "gradient is not L-Lipschitz on a sampled pair");
      }
      if (gk.strong_convexity > 0) {
        const double inner = (gx - gy).dot(x - y);
        if (inner < gk.strong_convexity * dist * dist * (1.0 - 1e-9) - 1e-12) {
          fail(k, "strong-convexity inner-product test failed");
        }
      }
      const Vec fd = central_difference(gk, x);
      if ((gx - fd).norm() > 1e-5 * (1.0 + gx.norm())) {
        fail(k, "gradient does not match central finite differences");
      }
      // Convexity spot check of h on a feasible pair.
      const auto& hk = p.h(k);
      const double theta = rng.uniform();
      const Vec mid = theta * x + (1.0 - theta) * y;
      const double hmid = hk.value(mid);
      const double hx = hk.value(x);
      const double hy = hk.value(y);
      if (std::isfinite(hx) && std::isfinite(hy) && std::isfinite(hmid)) {
        if (hmid > theta * hx + (1.0 - theta) * hy + 1e-9 * (1.0 + std::abs(hx) + std::abs(hy))) {
          fail(k, "nonsmooth convexity spot check failed");
        }
      }
    }
    const auto& hk = p.h(k);
    if (hk.has_indicator()) {
      const auto& set = *hk.feasible_set;
      if (!(set.anchor_slack() > 0)) fail(k, "interior anchor is not strictly feasible");
      for (int t = 0; t < pairs_per_cost; ++t) {
        const Vec a = set.sample(rng);
        const Vec b = set.sample(rng);
        if ((a - b).norm() > set.diameter() * (1.0 + 1e-9)) {
          fail(k, "sampled feasible pair exceeds the declared diameter");
        }
      }
    }
  }
  return report;
}

}  // namespace oipg
