#include "oipg/feasible_set.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oipg {

FeasibleSet FeasibleSet::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("box: bound dimensions must match and be nonzero");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("box: lower must be strictly below upper");
    }
  }
  FeasibleSet s;
  s.kind_ = SetKind::Box;
  s.dim_ = static_cast<int>(lower.size());
  s.anchor_ = 0.5 * (lower + upper);
  s.diameter_ = (upper - lower).norm();
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

FeasibleSet FeasibleSet::ball(Vec center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball: radius must be positive");
  FeasibleSet s;
  s.kind_ = SetKind::Ball;
  s.dim_ = static_cast<int>(center.size());
  s.anchor_ = center;
  s.center_ = std::move(center);
  s.radius_ = radius;
  s.diameter_ = 2.0 * radius;
  return s;
}

FeasibleSet FeasibleSet::polytope(std::vector<LinearConstraint> ineqs, Vec anchor,
                                  double diameter, Mat eq_a, Vec eq_b) {
  if (ineqs.empty()) throw std::invalid_argument("polytope: needs at least one halfspace");
  const int n = static_cast<int>(anchor.size());
  for (const auto& c : ineqs) {
    if (c.a.size() != n) throw std::invalid_argument("polytope: row dimension mismatch");
    if (c.a.norm() < 1e-14) throw std::invalid_argument("polytope: zero constraint row");
  }
  if (eq_a.size() != 0 && (eq_a.cols() != n || eq_a.rows() != eq_b.size())) {
    throw std::invalid_argument("polytope: equality block dimension mismatch");
  }
  if (!(diameter > 0)) throw std::invalid_argument("polytope: diameter bound must be positive");
  FeasibleSet s;
  s.kind_ = SetKind::Polytope;
  s.dim_ = n;
  s.ineqs_ = std::move(ineqs);
  s.eq_a_ = std::move(eq_a);
  s.eq_b_ = std::move(eq_b);
  s.anchor_ = std::move(anchor);
  s.diameter_ = diameter;
  if (s.anchor_slack() <= 0) {
    throw std::invalid_argument("polytope: anchor is not strictly feasible");
  }
  return s;
}

double FeasibleSet::violation(const Vec& x) const {
  require_dimension(x, dim_, "FeasibleSet::violation");
  double v = 0.0;
  switch (kind_) {
    case SetKind::Box:
      for (int i = 0; i < dim_; ++i) {
        v = std::max(v, lower_[i] - x[i]);
        v = std::max(v, x[i] - upper_[i]);
      }
      break;
    case SetKind::Ball:
      v = std::max(0.0, (x - center_).norm() - radius_);
      break;
    case SetKind::Polytope:
      for (const auto& c : ineqs_) {
        v = std::max(v, (c.a.dot(x) - c.b) / c.a.norm());
      }
      for (int r = 0; r < eq_a_.rows(); ++r) {
        const double rn = eq_a_.row(r).norm();
        v = std::max(v, std::abs(eq_a_.row(r).dot(x) - eq_b_[r]) / std::max(rn, 1e-14));
      }
      break;
  }
  return v;
}

double FeasibleSet::anchor_slack() const {
  switch (kind_) {
    case SetKind::Box: {
      double s = std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i) {
        s = std::min(s, anchor_[i] - lower_[i]);
        s = std::min(s, upper_[i] - anchor_[i]);
      }
      return s;
    }
    case SetKind::Ball:
      return radius_ - (anchor_ - center_).norm();
    case SetKind::Polytope: {
      double s = std::numeric_limits<double>::infinity();
      for (const auto& c : ineqs_) {
        s = std::min(s, (c.b - c.a.dot(anchor_)) / c.a.norm());
      }
      for (int r = 0; r < eq_a_.rows(); ++r) {
        if (std::abs(eq_a_.row(r).dot(anchor_) - eq_b_[r]) > 1e-9) return -1.0;
      }
      return s;
    }
  }
  return 0.0;
}

namespace {

Vec clamp_to_box(const Vec& y, const Vec& lo, const Vec& hi) {
  return y.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

Vec FeasibleSet::project(const Vec& y, const ProjectionParams& params) const {
  require_dimension(y, dim_, "FeasibleSet::project");
  switch (kind_) {
    case SetKind::Box:
      return clamp_to_box(y, lower_, upper_);
    case SetKind::Ball: {
      const Vec d = y - center_;
      const double norm = d.norm();
      if (norm <= radius_) return y;
      return center_ + (radius_ / norm) * d;
    }
    case SetKind::Polytope:
      break;
  }

  return active_set_project(y, params);
}

// Primal active-set solve of min ||x - y||^2 over the polytope. Working-set
// candidates are exact affine projections, so termination is finite; rank
// deficiency is absorbed by the complete orthogonal decomposition.
Vec FeasibleSet::active_set_project(const Vec& y, const ProjectionParams& params) const {
  const int m_eq = static_cast<int>(eq_a_.rows());
  const int m_in = static_cast<int>(ineqs_.size());

  Vec x = pull_inside(y);
  std::vector<bool> working(static_cast<size_t>(m_in), false);
  for (int i = 0; i < m_in; ++i) {
    const auto& c = ineqs_[static_cast<size_t>(i)];
    working[static_cast<size_t>(i)] =
        c.a.dot(x) >= c.b - 1e-12 * (1.0 + std::abs(c.b));
  }

  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < params.max_passes; ++iter) {
    std::vector<int> active;
    for (int i = 0; i < m_in; ++i) {
      if (working[static_cast<size_t>(i)]) active.push_back(i);
    }
    const int rows = m_eq + static_cast<int>(active.size());

    Vec candidate = y;
    Vec multipliers;
    if (rows > 0) {
      Mat a(rows, dim_);
      Vec b(rows);
      for (int r = 0; r < m_eq; ++r) {
        a.row(r) = eq_a_.row(r);
        b[r] = eq_b_[r];
      }
      for (size_t r = 0; r < active.size(); ++r) {
        const auto& c = ineqs_[static_cast<size_t>(active[r])];
        a.row(m_eq + static_cast<int>(r)) = c.a.transpose();
        b[m_eq + static_cast<int>(r)] = c.b;
      }
      const Mat gram = a * a.transpose();
      multipliers = Eigen::CompleteOrthogonalDecomposition<Mat>(gram).solve(
          Vec(a * y - b));
      candidate = y - a.transpose() * multipliers;
    }

    const Vec direction = candidate - x;
    residual = direction.norm();
    if (residual <= params.tol * (1.0 + x.norm())) {
      // Stationary on the working face; check the inequality multipliers.
      int drop = -1;
      double most_negative = -1e-10;
      for (size_t r = 0; r < active.size(); ++r) {
        const double lambda = multipliers[m_eq + static_cast<int>(r)];
        if (lambda < most_negative) {
          most_negative = lambda;
          drop = active[r];
        }
      }
      if (drop < 0) {
        return pull_inside(candidate);
      }
      working[static_cast<size_t>(drop)] = false;
      continue;
    }

    // Step toward the candidate until a new inequality blocks.
    double step = 1.0;
    int blocking = -1;
    for (int i = 0; i < m_in; ++i) {
      if (working[static_cast<size_t>(i)]) continue;
      const auto& c = ineqs_[static_cast<size_t>(i)];
      const double along = c.a.dot(direction);
      if (along <= 1e-14 * c.a.norm() * residual) continue;
      const double room = c.b - c.a.dot(x);
      const double t = std::max(0.0, room / along);
      if (t < step) {
        step = t;
        blocking = i;
      }
    }
    x += step * direction;
    if (blocking >= 0) working[static_cast<size_t>(blocking)] = true;
  }
  throw ConvergenceError("polytope projection hit the iteration cap", residual);
}

double FeasibleSet::dykstra_pass(Vec& x, std::vector<Vec>& corr) const {
  const int m_eq = static_cast<int>(eq_a_.rows());
  const int m_in = static_cast<int>(ineqs_.size());
  double shift_sq = 0.0;
  for (int i = 0; i < m_eq + m_in; ++i) {
    const Vec z = x + corr[i];
    Vec proj;
    if (i < m_eq) {
      const Vec a = eq_a_.row(i).transpose();
      proj = z - ((a.dot(z) - eq_b_[i]) / a.squaredNorm()) * a;
    } else {
      const auto& c = ineqs_[i - m_eq];
      const double excess = c.a.dot(z) - c.b;
      proj = excess > 0 ? Vec(z - (excess / c.a.squaredNorm()) * c.a) : z;
    }
    const Vec corr_new = z - proj;
    shift_sq += (corr_new - corr[i]).squaredNorm();
    corr[i] = corr_new;
    x = proj;
  }
  return std::sqrt(shift_sq);
}

Vec FeasibleSet::dykstra_passes(const Vec& y, int passes) const {
  if (kind_ != SetKind::Polytope) {
    throw CapabilityError("dykstra_passes: polytope sets only");
  }
  require_dimension(y, dim_, "FeasibleSet::dykstra_passes");
  std::vector<Vec> corr(eq_a_.rows() + ineqs_.size(), Vec::Zero(dim_));
  Vec x = y;
  for (int pass = 0; pass < passes; ++pass) dykstra_pass(x, corr);
  return x;
}

Vec FeasibleSet::pull_inside(const Vec& x) const {
  require_dimension(x, dim_, "FeasibleSet::pull_inside");
  switch (kind_) {
    case SetKind::Box:
      return clamp_to_box(x, lower_, upper_);
    case SetKind::Ball: {
      const Vec d = x - center_;
      const double norm = d.norm();
      if (norm <= radius_) return x;
      return center_ + (radius_ / norm) * d;
    }
    case SetKind::Polytope:
      break;
  }
  Vec z = x;
  if (eq_a_.rows() > 0) {
    // Least-squares step onto the affine subspace; the anchor lies on it, so
    // the pull below stays on it as well.
    const Vec r = eq_a_ * z - eq_b_;
    z -= eq_a_.transpose() *
         (eq_a_ * eq_a_.transpose()).ldlt().solve(r);
  }
  double t = 0.0;
  for (const auto& c : ineqs_) {
    const double at_z = c.a.dot(z);
    if (at_z > c.b) {
      const double at_anchor = c.a.dot(anchor_);
      // at_anchor < b strictly, so the denominator is positive.
      t = std::max(t, (at_z - c.b) / (at_z - at_anchor));
    }
  }
  if (t <= 0.0) return z;
  return z + std::min(t, 1.0) * (anchor_ - z);
}

FeasibleSet FeasibleSet::shrink(double margin) const {
  if (margin < 0) throw std::invalid_argument("shrink: margin must be nonnegative");
  if (margin == 0) return *this;
  FeasibleSet s = *this;
  switch (kind_) {
    case SetKind::Box: {
      s.lower_ = lower_.array() + margin;
      s.upper_ = upper_.array() - margin;
      for (int i = 0; i < dim_; ++i) {
        if (!(s.lower_[i] < s.upper_[i])) {
          throw CapabilityError("shrink: margin empties the box");
        }
      }
      s.anchor_ = 0.5 * (s.lower_ + s.upper_);
      break;
    }
    case SetKind::Ball: {
      if (!(radius_ - margin > 0)) throw CapabilityError("shrink: margin empties the ball");
      s.radius_ = radius_ - margin;
      break;
    }
    case SetKind::Polytope: {
      for (auto& c : s.ineqs_) {
        if (c.restrictable) c.b -= margin * c.a.norm();
      }
      if (s.anchor_slack() <= 0) {
        throw CapabilityError("shrink: margin excludes the interior anchor");
      }
      break;
    }
  }
  return s;
}

Vec FeasibleSet::sample(Rng& rng) const {
  switch (kind_) {
    case SetKind::Box: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(lower_[i], upper_[i]);
      return x;
    }
    case SetKind::Ball: {
      const Vec dir = rng.unit_sphere(dim_);
      const double r = radius_ * std::pow(rng.uniform(), 1.0 / dim_);
      return center_ + r * dir;
    }
    case SetKind::Polytope: {
      const Vec probe = anchor_ + (0.5 * diameter_) * rng.uniform() * rng.unit_sphere(dim_);
      return pull_inside(probe);
    }
  }
  return anchor_;
}

}  // namespace oipg
