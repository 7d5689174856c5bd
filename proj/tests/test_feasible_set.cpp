#include <doctest.h>

#include "test_support.hpp"

using namespace oipg;
using oipg::testing::enumerate_projection;
using oipg::testing::random_polytope;

TEST_CASE("box projection clamps coordinatewise") {
  const auto box = FeasibleSet::box(Vec::Zero(2), Vec::Ones(2));
  Vec y(2);
  y << 1.5, -0.2;
  const Vec x = box.project(y);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(box.diameter() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("ball projection is radial") {
  const auto ball = FeasibleSet::ball(Vec::Zero(3), 2.0);
  Vec y(3);
  y << 6.0, 0.0, 0.0;
  const Vec x = ball.project(y);
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(0.0));
  Vec inside(3);
  inside << 0.5, 0.2, -0.1;
  CHECK((ball.project(inside) - inside).norm() == doctest::Approx(0.0));
}

TEST_CASE("polytope projection matches the active-set enumeration oracle") {
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);  // 2 or 3
    const auto poly = random_polytope(n, 3, rng);
    const Vec y = 3.0 * rng.gaussian_vector(n);
    ProjectionParams tight;
    tight.tol = 1e-12;
    tight.max_passes = 200000;
    const Vec x = poly.project(y, tight);
    const Vec oracle = enumerate_projection(poly.inequalities(), y);
    CHECK((x - oracle).norm() < 1e-8);
    CHECK(poly.contains(x));
  }
}

TEST_CASE("projection is non-expansive on sampled pairs") {
  Rng rng(5);
  const auto poly = random_polytope(3, 2, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec y1 = 2.5 * rng.gaussian_vector(3);
    const Vec y2 = 2.5 * rng.gaussian_vector(3);
    const double lhs = (poly.project(y1) - poly.project(y2)).norm();
    CHECK(lhs <= (y1 - y2).norm() * (1.0 + 1e-9) + 1e-9);
  }
}

TEST_CASE("pull_inside repairs violations and fixes feasible points") {
  Rng rng(9);
  const auto poly = random_polytope(2, 2, rng);
  const Vec feasible = poly.sample(rng);
  CHECK((poly.pull_inside(feasible) - feasible).norm() == doctest::Approx(0.0));
  Vec outside(2);
  outside << 5.0, 5.0;
  const Vec repaired = poly.pull_inside(outside);
  CHECK(poly.contains(repaired));
}

TEST_CASE("polytope with an affine equality") {
  // x0 + x1 = 1 inside the unit box.
  std::vector<LinearConstraint> rows;
  for (int i = 0; i < 2; ++i) {
    Vec a = Vec::Zero(2);
    a[i] = 1.0;
    rows.push_back({a, 1.0, true});
    rows.push_back({Vec(-a), 1.0, true});
  }
  Mat eq(1, 2);
  eq << 1.0, 1.0;
  Vec eq_b(1);
  eq_b << 1.0;
  Vec anchor(2);
  anchor << 0.5, 0.5;
  const auto poly =
      FeasibleSet::polytope(rows, anchor, 2.0 * std::sqrt(2.0), eq, eq_b);
  Vec y(2);
  y << 2.0, 0.0;
  const Vec x = poly.project(y);
  CHECK(x[0] + x[1] == doctest::Approx(1.0).epsilon(1e-9));
  // Projection of (2, 0) onto the segment x0 + x1 = 1 within the box.
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("shrink tightens restrictable faces only") {
  Rng rng(10);
  std::vector<LinearConstraint> rows;
  Vec a0(1), a1(1);
  a0 << 1.0;
  a1 << -1.0;
  rows.push_back({a0, 1.0, true});
  rows.push_back({a1, 0.0, false});  // x >= 0, never tightened
  const auto poly = FeasibleSet::polytope(rows, Vec::Constant(1, 0.4), 1.0);
  const auto shrunk = poly.shrink(0.2);
  CHECK(shrunk.inequalities()[0].b == doctest::Approx(0.8));
  CHECK(shrunk.inequalities()[1].b == doctest::Approx(0.0));
  Vec zero = Vec::Zero(1);
  CHECK(shrunk.contains(zero));

  const auto box = FeasibleSet::box(Vec::Zero(2), Vec::Ones(2));
  const auto small = box.shrink(0.25);
  CHECK(small.lower()[0] == doctest::Approx(0.25));
  CHECK(small.upper()[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(box.shrink(0.6), CapabilityError);
}

TEST_CASE("shrink rejects margins that exclude the anchor") {
  Rng rng(11);
  const auto poly = random_polytope(2, 0, rng);
  CHECK_THROWS_AS(poly.shrink(1.5), CapabilityError);
}

TEST_CASE("samples are feasible and within the declared diameter") {
  Rng rng(12);
  const auto poly = random_polytope(3, 3, rng);
  for (int i = 0; i < 100; ++i) {
    const Vec a = poly.sample(rng);
    const Vec b = poly.sample(rng);
    CHECK(poly.contains(a));
    CHECK((a - b).norm() <= poly.diameter() * (1.0 + 1e-12));
  }
  CHECK(poly.anchor_slack() > 0);
}

TEST_CASE("projection reports the pass cap through ConvergenceError") {
  Rng rng(13);
  const auto poly = random_polytope(3, 3, rng);
  Vec y = Vec::Constant(3, 4.0);
  ProjectionParams starved;
  starved.tol = 1e-14;
  starved.max_passes = 1;
  try {
    poly.project(y, starved);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.achieved_residual > 0.0);
  }
}

TEST_CASE("dykstra_passes runs an exact pass budget") {
  Rng rng(14);
  const auto poly = random_polytope(2, 1, rng);
  Vec y = Vec::Constant(2, 3.0);
  CHECK((poly.dykstra_passes(y, 0) - y).norm() == doctest::Approx(0.0));
  const Vec few = poly.dykstra_passes(y, 2);
  const Vec many = poly.dykstra_passes(y, 200);
  ProjectionParams tight;
  tight.tol = 1e-12;
  tight.max_passes = 100000;
  const Vec exact = poly.project(y, tight);
  CHECK((many - exact).norm() <= (few - exact).norm() + 1e-12);
}
