#pragma once

#include <optional>
#include <vector>

#include "oipg/rng.hpp"
#include "oipg/types.hpp"

namespace oipg {

enum class SetKind { Box, Ball, Polytope };

/// One halfspace a.dot(x) <= b. `restrictable` marks constraints that a
/// margin restriction is allowed to tighten (capacity-style rows); sign
/// constraints such as x >= 0 are typically left untightened.
struct LinearConstraint {
  Vec a;
  double b = 0.0;
  bool restrictable = true;
};

struct ProjectionParams {
  double tol = 1e-10;
  int max_passes = 10000;
};

/// A closed convex feasible region: a box, a Euclidean ball, or a polytope
/// given by halfspaces plus optional affine equalities. Every set carries a
/// strictly feasible anchor and an upper bound on its diameter.
class FeasibleSet {
 public:
  static FeasibleSet box(Vec lower, Vec upper);
  static FeasibleSet ball(Vec center, double radius);
  static FeasibleSet polytope(std::vector<LinearConstraint> ineqs, Vec anchor,
                              double diameter, Mat eq_a = Mat(), Vec eq_b = Vec());

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double diameter() const { return diameter_; }
  const Vec& interior_anchor() const { return anchor_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const std::vector<LinearConstraint>& inequalities() const { return ineqs_; }

  /// Largest constraint violation at x, each halfspace normalized by its row
  /// norm so the value reads as a Euclidean distance scale.
  double violation(const Vec& x) const;

  bool contains(const Vec& x, double tol = 1e-9) const {
    return violation(x) <= tol;
  }

  /// Smallest normalized inequality slack at the anchor; > 0 by construction.
  double anchor_slack() const;

  /// Euclidean projection. Boxes and balls are closed form; polytopes solve
  /// the projection QP with a primal active-set iteration (finite
  /// termination, exact KKT point), throwing ConvergenceError at the
  /// iteration cap.
  Vec project(const Vec& y, const ProjectionParams& params = {}) const;

  /// Exactly `passes` Dykstra passes from y, no convergence check and no
  /// feasibility repair. Polytopes only; passes = 0 returns y.
  Vec dykstra_passes(const Vec& y, int passes) const;

  double distance(const Vec& y, const ProjectionParams& params = {}) const {
    return (y - project(y, params)).norm();
  }

  /// Minimal pull of x toward the anchor that lands strictly inside the
  /// inequalities (and on the equalities). Identity for feasible x.
  Vec pull_inside(const Vec& x) const;

  /// Tightens every restrictable face by a Euclidean margin: any point of the
  /// shrunk set is at distance >= margin from those faces of the original.
  /// Throws CapabilityError when the anchor no longer fits.
  FeasibleSet shrink(double margin) const;

  /// A feasible point for spot checks and sampling-based estimates. Uniform
  /// for boxes and balls; anchor-pulled perturbations for polytopes.
  Vec sample(Rng& rng) const;

 private:
  FeasibleSet() = default;
  double dykstra_pass(Vec& x, std::vector<Vec>& corr) const;  // correction shift
  Vec active_set_project(const Vec& y, const ProjectionParams& params) const;

  SetKind kind_ = SetKind::Box;
  int dim_ = 0;
  Vec lower_, upper_;        // box
  Vec center_;               // ball
  double radius_ = 0.0;      // ball
  std::vector<LinearConstraint> ineqs_;  // polytope
  Mat eq_a_;                 // polytope equalities (may be empty)
  Vec eq_b_;
  Vec anchor_;
  double diameter_ = 0.0;
};

}  // namespace oipg
