#pragma once

#include <optional>

#include "oipg/problem.hpp"
#include "oipg/rng.hpp"

namespace oipg {

/// A point approximating prox_{lambda h}(y) together with its certificates.
///
/// eps_certified is the distance ||point - prox_exact(y)||; eps_gap is
/// sqrt(2 lambda (Phi(point) - Phi(prox))) where Phi is the prox objective.
/// Phi is (1/lambda)-strongly convex, so eps_certified <= eps_gap always;
/// both satisfy eps_certified <= eps_target + 1e-8 for every constructor.
struct ProxResult {
  Vec point;
  double eps_target = 0.0;
  double eps_certified = 0.0;
  double eps_gap = 0.0;
  std::optional<double> residual_norm;  // ||r|| when built as prox + r
};

enum class ProxMode { Exact, Perturbed, InteriorInexact, RestrictedMargin, Budgeted };

/// Per-step inexactness target; constant unless a per-step schedule is set.
struct EpsSchedule {
  double constant = 0.0;
  std::vector<double> per_step;  // 1-based through index k-1 when nonempty

  double at(int k) const {
    if (per_step.empty()) return constant;
    if (k < 1 || k > static_cast<int>(per_step.size())) {
      throw std::out_of_range("eps schedule has no entry for step " + std::to_string(k));
    }
    return per_step[static_cast<size_t>(k - 1)];
  }
  void validate() const {
    if (constant < 0) throw std::invalid_argument("eps schedule: negative constant");
    for (double e : per_step) {
      if (e < 0) throw std::invalid_argument("eps schedule: negative entry");
    }
  }
};

struct ProxOracleConfig {
  ProxMode mode = ProxMode::Exact;
  EpsSchedule eps;
  double margin = 0.0;      // restricted-margin mode
  int inner_budget = 0;     // budgeted mode
  std::uint64_t rng_seed = 0;

  void validate() const {
    eps.validate();
    if (margin < 0) throw std::invalid_argument("prox oracle: negative margin");
    if (inner_budget < 0) throw std::invalid_argument("prox oracle: negative budget");
  }
};

/// Phi_{lambda h}(x) = h(x) + ||x - y||^2 / (2 lambda).
double prox_objective(const NonsmoothCost& h, double lambda, const Vec& y, const Vec& x);

/// Exact proximal point. Closed form for l1, group, box and l1-over-box;
/// Dykstra's scheme (tolerance/cap in params) for polytopes.
Vec prox_exact(const NonsmoothCost& h, double lambda, const Vec& y,
               const ProjectionParams& params = {});

/// prox_exact(y) + r with ||r|| <= eps. For indicator-containing h the
/// perturbation moves toward the interior anchor so the point stays feasible;
/// otherwise the direction is uniform on the sphere. The realized ||r|| is
/// certified exactly.
ProxResult prox_perturbed(const NonsmoothCost& h, double lambda, const Vec& y,
                          double eps, Rng& rng);

enum class ProjectMode { InteriorInexact, RestrictedMargin };

/// Inexact projection onto a feasible set.
///
/// InteriorInexact returns a feasible x shifted from the exact projection
/// toward the anchor, with the largest step (found by bisection) that keeps
/// ||x - y||^2 <= d(y, set)^2 + eps^2; the inequality is re-verified before
/// returning. RestrictedMargin projects exactly onto the margin-shrunk set
/// and certifies the distance to the unshrunk projection post hoc.
ProxResult project_inexact(const FeasibleSet& set, const Vec& y, double eps,
                           ProjectMode mode, double margin = 0.0);

/// Runs the inner iterative scheme for exactly `inner_budget` passes starting
/// from y: cyclic block updates for group norms, Dykstra passes (plus a final
/// feasibility repair) for polytope indicators. Certified against a
/// tight-tolerance reference prox.
ProxResult prox_budgeted(const NonsmoothCost& h, double lambda, const Vec& y,
                         int inner_budget);

struct PrecisionCertificate {
  double eps_certified = 0.0;  // ||x - prox_exact(y)||
  double eps_gap = 0.0;        // sqrt(2 lambda max(0, Phi(x) - Phi(prox)))
  bool feasible = true;        // x feasible for an indicator h (gap finite)
  bool consistent = true;      // eps_certified <= eps_gap + 1e-8
};

PrecisionCertificate certify_precision(const NonsmoothCost& h, double lambda,
                                       const Vec& y, const Vec& x);

}  // namespace oipg
