#include <doctest.h>

#include <memory>

#include "test_support.hpp"

#include "oipg/analysis.hpp"
#include "oipg/generators.hpp"
#include "oipg/solver.hpp"

using namespace oipg;

namespace {

TimeVaryingProblem repeated_cost(int n, int horizon, const SmoothCost& g,
                                 const NonsmoothCost& h) {
  TimeVaryingProblem p;
  p.dimension = n;
  p.horizon = horizon;
  for (int k = 0; k < horizon; ++k) {
    p.smooth.push_back(g);
    p.nonsmooth.push_back(h);
  }
  return p;
}

SmoothCost half_norm_squared(std::shared_ptr<int> eval_counter = nullptr,
                             std::shared_ptr<int> grad_counter = nullptr) {
  SmoothCost g;
  g.lipschitz = 1.0;
  g.strong_convexity = 1.0;
  g.value = [eval_counter](const Vec& x) {
    if (eval_counter) ++*eval_counter;
    return 0.5 * x.squaredNorm();
  };
  g.gradient = [grad_counter](const Vec& x) {
    if (grad_counter) ++*grad_counter;
    return x;
  };
  return g;
}

}  // namespace

TEST_CASE("a single exact step reaches the minimizer when alpha = 1/L") {
  const auto p = repeated_cost(3, 1, half_norm_squared(), NonsmoothCost::zero());
  SolverConfig cfg;
  cfg.alpha = 1.0;
  cfg.x0 = Vec::Constant(3, 2.5);
  Rng grad_rng(1), prox_rng(2);
  const auto rec = step(p, 1, cfg.x0, cfg, grad_rng, prox_rng);
  CHECK(rec.x.norm() == doctest::Approx(0.0));
  CHECK(rec.eps == 0.0);
  CHECK(rec.grad_error_norm == 0.0);
}

TEST_CASE("perturbed box runs stay feasible at every step") {
  QuadraticBoxParams params;
  params.dimension = 3;
  params.horizon = 60;
  params.box_lo = 0.0;
  params.box_hi = 1.0;
  params.drift.kind = DriftKind::RandomWalk;
  params.drift.step = 0.1;
  params.seed = 51;
  const auto p = gen_quadratic_box(params);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Constant(3, 0.5);
  cfg.seed = 52;
  cfg.prox.mode = ProxMode::Perturbed;
  cfg.prox.eps.constant = 0.05;
  const auto trace = run(p, cfg);
  REQUIRE_FALSE(trace.error.has_value());
  const auto box = FeasibleSet::box(Vec::Zero(3), Vec::Ones(3));
  for (const auto& rec : trace.records) {
    CHECK(box.contains(rec.x));
    CHECK(rec.eps <= 0.05 + 1e-12);
  }
}

TEST_CASE("per-step tracking inequality against the reference path") {
  QuadraticBoxParams params;
  params.dimension = 6;
  params.horizon = 80;
  params.q_min = 0.5;
  params.q_max = 2.0;
  params.drift.kind = DriftKind::RandomWalk;
  params.drift.step = 0.08;
  params.seed = 53;
  const auto p = gen_quadratic_box(params);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Constant(6, 1.0);
  cfg.seed = 54;
  cfg.gradient.model = GradModel::BoundedNoise;
  cfg.gradient.noise_level = 0.2;
  cfg.prox.mode = ProxMode::Perturbed;
  cfg.prox.eps.constant = 0.05;
  const auto trace = run(p, cfg);
  REQUIRE_FALSE(trace.error.has_value());

  const auto path = compute_optima_path(p);
  double prev = (trace.x0 - path.optima[0]).norm();
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    const double err = (rec.x - path.optima[i + 1]).norm();
    const double rho = contraction_factor(cfg.alpha, 0.5, 2.0).rho;
    const double rhs = rho * prev + rho * path.drift[i] +
                       cfg.alpha * rec.grad_error_norm + rec.eps;
    CHECK(err <= rhs + 1e-9 * (1.0 + rhs));
    prev = err;
  }
}

TEST_CASE("run produces exactly K contiguous records") {
  const auto p = repeated_cost(2, 100, half_norm_squared(), NonsmoothCost::zero());
  SolverConfig cfg;
  cfg.alpha = 0.3;
  cfg.x0 = Vec::Ones(2);
  const auto trace = run(p, cfg);
  REQUIRE(trace.records.size() == 100);
  for (int k = 1; k <= 100; ++k) {
    CHECK(trace.records[static_cast<size_t>(k - 1)].k == k);
  }

  SUBCASE("a shorter solver horizon caps the run") {
    cfg.horizon = 40;
    CHECK(run(p, cfg).records.size() == 40);
    cfg.horizon = 101;
    CHECK_THROWS_AS(run(p, cfg), std::invalid_argument);
  }
}

TEST_CASE("budgeted prox oracle inside the loop") {
  const auto p =
      gen_network_flow(NetworkTopology::default_six_node(), 20, NetworkFlowParams{}, 61);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.seed = 62;
  cfg.x0 = p.h(1).feasible_set->interior_anchor();
  cfg.prox.mode = ProxMode::Budgeted;
  cfg.prox.inner_budget = 30;
  const auto trace = run(p, cfg);
  REQUIRE_FALSE(trace.error.has_value());
  for (const auto& rec : trace.records) {
    CHECK(p.h(rec.k).feasible_set->contains(rec.x));
    CHECK(rec.eps >= 0.0);
    CHECK(rec.eps <= rec.eps_gap + 1e-8);
  }
}

TEST_CASE("static strongly convex run decays Q-linearly") {
  // Minimizer at the origin keeps each coordinate update purely
  // multiplicative, so the per-step ratio stays at rho to the last bit.
  TimeVaryingProblem p;
  p.dimension = 4;
  p.horizon = 50;
  Vec q(4);
  q << 2.0, 1.3, 0.8, 0.5;
  const auto box = FeasibleSet::box(Vec::Constant(4, -6.0), Vec::Constant(4, 6.0));
  for (int k = 0; k < p.horizon; ++k) {
    SmoothCost g;
    g.lipschitz = 2.0;
    g.strong_convexity = 0.5;
    g.value = [q](const Vec& x) { return 0.5 * (q.array() * x.array().square()).sum(); };
    g.gradient = [q](const Vec& x) { return Vec(q.array() * x.array()); };
    p.smooth.push_back(std::move(g));
    p.nonsmooth.push_back(NonsmoothCost::indicator(box));
  }
  p.analytic_optimum = [](int) { return Vec::Zero(4); };

  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Constant(4, 3.0);
  const auto trace = run(p, cfg);
  REQUIRE_FALSE(trace.error.has_value());
  const auto path = compute_optima_path(p);
  const double rho = problem_constants(p, cfg.alpha).rho;
  double prev = (trace.x0 - path.optima[0]).norm();
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const double err = (trace.records[i].x - path.optima[i + 1]).norm();
    CHECK(err / prev <= rho + 1e-12);
    prev = err;
  }
}

TEST_CASE("identical seeds give bitwise identical traces") {
  QuadraticBoxParams params;
  params.dimension = 3;
  params.horizon = 40;
  params.drift.kind = DriftKind::RandomWalk;
  params.drift.step = 0.1;
  params.seed = 56;
  const auto p = gen_quadratic_box(params);
  SolverConfig cfg;
  cfg.alpha = 0.4;
  cfg.x0 = Vec::Zero(3);
  cfg.seed = 57;
  cfg.gradient.model = GradModel::BoundedNoise;
  cfg.gradient.noise_level = 0.3;
  cfg.prox.mode = ProxMode::Perturbed;
  cfg.prox.eps.constant = 0.02;
  const auto a = run(p, cfg);
  const auto b = run(p, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK((a.records[i].x - b.records[i].x).norm() == 0.0);
    CHECK(a.records[i].eps == b.records[i].eps);
    CHECK(a.records[i].grad_error_norm == b.records[i].grad_error_norm);
  }
}

TEST_CASE("a failing step returns the partial trace with the error") {
  SmoothCost g = half_norm_squared();
  TimeVaryingProblem p = repeated_cost(2, 5, g, NonsmoothCost::zero());
  p.smooth[2].gradient = [](const Vec&) -> Vec {
    throw std::domain_error("probe blew up");
  };
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Ones(2);
  const auto trace = run(p, cfg);
  REQUIRE(trace.error.has_value());
  CHECK(trace.error->k == 3);
  CHECK(trace.records.size() == 2);
  CHECK(trace.error->message.find("k=3") != std::string::npos);
}

TEST_CASE("one oracle call per time index") {
  auto grads = std::make_shared<int>(0);
  const auto p = repeated_cost(2, 30, half_norm_squared(nullptr, grads),
                               NonsmoothCost::zero());
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Ones(2);
  run(p, cfg);
  CHECK(*grads == 30);

  auto evals = std::make_shared<int>(0);
  const auto pz = repeated_cost(2, 30, half_norm_squared(evals, nullptr),
                                NonsmoothCost::zero());
  SolverConfig zcfg = cfg;
  zcfg.gradient.model = GradModel::ZerothOrder;
  zcfg.gradient.zeroth_order.total_evaluations = 9;
  zcfg.gradient.zeroth_order.radius = 0.01;
  run(pz, zcfg);
  // One oracle invocation per step: M evaluations, plus the objective record.
  CHECK(*evals == 30 * (9 + 1));
}

TEST_CASE("infeasible starts are repaired once") {
  QuadraticBoxParams params;
  params.dimension = 2;
  params.horizon = 3;
  params.box_lo = 0.0;
  params.box_hi = 1.0;
  params.seed = 58;
  const auto p = gen_quadratic_box(params);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Constant(2, 9.0);
  const auto trace = run(p, cfg);
  CHECK(trace.x0[0] == doctest::Approx(1.0));
  REQUIRE(trace.warnings.size() == 1);
  CHECK(trace.warnings[0].find("repaired") != std::string::npos);
}

TEST_CASE("per-step precision schedules") {
  QuadraticBoxParams params;
  params.dimension = 2;
  params.horizon = 4;
  params.box_lo = 0.0;
  params.box_hi = 1.0;
  params.seed = 59;
  const auto p = gen_quadratic_box(params);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Constant(2, 0.5);
  cfg.seed = 60;
  cfg.prox.mode = ProxMode::Perturbed;
  cfg.prox.eps.per_step = {0.2, 0.1, 0.0, 0.05};
  const auto trace = run(p, cfg);
  REQUIRE_FALSE(trace.error.has_value());
  CHECK(trace.records[0].eps <= 0.2 + 1e-12);
  CHECK(trace.records[2].eps == 0.0);

  SUBCASE("short schedules fail at the first uncovered step") {
    cfg.prox.eps.per_step = {0.2, 0.1};
    const auto partial = run(p, cfg);
    REQUIRE(partial.error.has_value());
    CHECK(partial.error->k == 3);
    CHECK(partial.records.size() == 2);
  }

  SUBCASE("negative entries are rejected up front") {
    cfg.prox.eps.per_step = {0.1, -0.1, 0.1, 0.1};
    CHECK_THROWS_AS(run(p, cfg), std::invalid_argument);
  }
}

TEST_CASE("restricted margins must cover the sampling radius") {
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Zero(2);
  cfg.gradient.model = GradModel::ZerothOrder;
  cfg.gradient.zeroth_order.radius = 0.1;
  cfg.prox.mode = ProxMode::RestrictedMargin;
  cfg.prox.margin = 0.05;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.prox.margin = 0.1;
  CHECK_NOTHROW(cfg.validate());
}
