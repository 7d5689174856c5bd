#include <doctest.h>

#include "test_support.hpp"

#include "oipg/analysis.hpp"
#include "oipg/generators.hpp"

using namespace oipg;

namespace {

TimeVaryingProblem static_diag_quadratic(Vec q, int horizon) {
  TimeVaryingProblem p;
  p.dimension = static_cast<int>(q.size());
  p.horizon = horizon;
  for (int k = 0; k < horizon; ++k) {
    SmoothCost g;
    g.lipschitz = q.maxCoeff();
    g.strong_convexity = q.minCoeff();
    g.value = [q](const Vec& x) { return 0.5 * (q.array() * x.array().square()).sum(); };
    g.gradient = [q](const Vec& x) { return Vec(q.array() * x.array()); };
    p.smooth.push_back(std::move(g));
    p.nonsmooth.push_back(NonsmoothCost::zero());
  }
  const int n = static_cast<int>(q.size());
  p.analytic_optimum = [n](int) { return Vec::Zero(n); };
  return p;
}

}  // namespace

TEST_CASE("numerical reference matches the soft-threshold minimizer") {
  LassoStreamParams params;
  params.dimension = 5;
  params.horizon = 4;
  params.weight = 0.4;
  params.seed = 61;
  params.drift.kind = DriftKind::RandomWalk;
  params.drift.step = 0.2;
  const auto lasso = gen_lasso_stream(params);
  TimeVaryingProblem numerical = lasso;
  numerical.analytic_optimum = nullptr;
  ReferenceParams ref;
  ref.tol = 1e-10;
  for (int k = 1; k <= 4; ++k) {
    const Vec closed_form = lasso.analytic_optimum(k);
    const Vec solved = reference_optimum(numerical, k, ref);
    CHECK((closed_form - solved).norm() <= 1e-8);
  }
}

TEST_CASE("box-constrained quadratic reference clamps the target") {
  QuadraticBoxParams params;
  params.dimension = 3;
  params.horizon = 2;
  params.box_lo = -0.5;
  params.box_hi = 0.5;
  params.q_min = 1.0;
  params.q_max = 1.0;
  params.seed = 62;
  params.drift.kind = DriftKind::Constant;
  params.drift.step = 0.4;
  const auto p = gen_quadratic_box(params);
  TimeVaryingProblem numerical = p;
  numerical.analytic_optimum = nullptr;
  const Vec solved = reference_optimum(numerical, 2, ReferenceParams{1e-10, 1000000});
  CHECK((solved - p.analytic_optimum(2)).norm() <= 1e-8);
}

TEST_CASE("network reference satisfies the forward-backward residual") {
  const auto net =
      gen_network_flow(NetworkTopology::default_six_node(), 2, NetworkFlowParams{}, 63);
  ReferenceParams ref;
  ref.tol = 1e-10;
  const Vec x = reference_optimum(net, 2, ref);
  const auto& g = net.g(2);
  const double step = 1.0 / g.lipschitz;
  ProjectionParams tight;
  tight.tol = 1e-13;
  tight.max_passes = 300000;
  const Vec mapped = prox_exact(net.h(2), step, x - step * g.gradient(x), tight);
  CHECK((x - mapped).norm() / step <= 1e-10 * (1.0 + x.norm()) + 1e-12);
}

TEST_CASE("reference solver reports its cap") {
  // Ill-conditioned quadratic: the 1/L step leaves the soft coordinate far
  // from optimal after two iterations.
  Vec q(2);
  q << 1e-3, 1.0;
  TimeVaryingProblem p;
  p.dimension = 2;
  p.horizon = 1;
  SmoothCost g;
  g.lipschitz = 1.0;
  g.strong_convexity = 1e-3;
  Vec b(2);
  b << 4.0, 4.0;
  g.value = [q, b](const Vec& x) {
    return 0.5 * (q.array() * (x - b).array().square()).sum();
  };
  g.gradient = [q, b](const Vec& x) { return Vec(q.array() * (x - b).array()); };
  p.smooth.push_back(std::move(g));
  p.nonsmooth.push_back(NonsmoothCost::zero());
  try {
    reference_optimum(p, 1, ReferenceParams{1e-14, 2});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.achieved_residual > 0.0);
  }
}

TEST_CASE("path metrics") {
  SUBCASE("static problems have zero drift") {
    std::vector<Vec> optima(5, Vec::Ones(3));
    const auto path = path_metrics(optima);
    for (double d : path.drift) CHECK(d == 0.0);
    CHECK(path.path_length.back() == 0.0);
  }

  SUBCASE("constant interior drift shows up one-to-one") {
    LassoStreamParams params;
    params.dimension = 2;
    params.horizon = 6;
    params.weight = 0.1;
    params.seed = 65;
    params.drift.kind = DriftKind::Constant;
    params.drift.step = 0.05;
    auto p = gen_lasso_stream(params);
    // Push the data far from the threshold so the soft threshold is affine.
    const auto path = compute_optima_path(p);
    for (size_t i = 1; i < path.drift.size(); ++i) {
      CHECK(path.drift[i] == doctest::Approx(0.05).epsilon(1e-9));
    }
    CHECK(path.drift[0] == 0.0);  // the k=0 convention
    double sum_sq = 0.0;
    for (double d : path.drift) sum_sq += d * d;
    CHECK(path.path_length_sq.back() == doctest::Approx(sum_sq).epsilon(1e-12));
  }

  SUBCASE("dimension mismatches are rejected") {
    std::vector<Vec> bad{Vec::Zero(2), Vec::Zero(3)};
    CHECK_THROWS_AS(path_metrics(bad), std::invalid_argument);
  }
}

TEST_CASE("error aggregates") {
  auto p = static_diag_quadratic(Vec::Ones(2), 10);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Ones(2);

  SUBCASE("exact runs accumulate nothing") {
    const auto trace = run(p, cfg);
    const auto agg = error_aggregates(trace);
    CHECK(agg.grad_error.back() == 0.0);
    CHECK(agg.prox_eps.back() == 0.0);
    CHECK(agg.prox_gap.back() == 0.0);
  }

  SUBCASE("constant prox schedule sums as expected") {
    auto trace = run(p, cfg);
    for (auto& rec : trace.records) rec.eps = 0.1;
    const auto agg = error_aggregates(trace);
    CHECK(agg.prox_eps.back() == doctest::Approx(1.0));
    CHECK(agg.prox_eps_sq.back() == doctest::Approx(0.1));
    for (size_t i = 1; i < agg.prox_eps.size(); ++i) {
      CHECK(agg.prox_eps[i] >= agg.prox_eps[i - 1]);
      CHECK(agg.grad_error[i] >= agg.grad_error[i - 1]);
    }
  }
}

TEST_CASE("tracking and regret series") {
  auto p = static_diag_quadratic(Vec::Ones(2), 3);
  SolverConfig cfg;
  cfg.alpha = 1.0;  // lands on the minimizer immediately
  cfg.x0 = Vec::Ones(2);
  const auto trace = run(p, cfg);
  const auto path = compute_optima_path(p);
  const auto series = tracking_series(trace, path);
  for (double e : series.error) CHECK(e == doctest::Approx(0.0));
  const auto regret = regret_series(p, trace, path);
  for (double r : regret) CHECK(r == doctest::Approx(0.0));

  SUBCASE("running average is the mean of the errors") {
    auto modified = trace;
    modified.records[0].x = Vec::Constant(2, 0.3);
    modified.records[1].x = Vec::Constant(2, 0.1);
    const auto s = tracking_series(modified, path);
    CHECK(s.running_avg[1] == doctest::Approx(0.5 * (s.error[0] + s.error[1])));
  }

  SUBCASE("one suboptimal step contributes its optimality gap") {
    auto modified = trace;
    Vec x(2);
    x << 0.5, 0.0;
    modified.records[0].x = x;
    modified.records[0].objective = eval_objective(p, 1, x);
    const auto r = regret_series(p, modified, path);
    CHECK(r[0] == doctest::Approx(0.5 * 0.25));
    for (size_t i = 1; i < r.size(); ++i) CHECK(r[i] >= r[i - 1] - 1e-15);
  }
}

TEST_CASE("tracking bounds on an exact static run") {
  auto p = static_diag_quadratic(Vec::Constant(3, 1.0), 20);
  SolverConfig cfg;
  cfg.alpha = 0.5;  // rho = 0.5
  cfg.x0 = Vec::Constant(3, 2.0);
  const auto trace = run(p, cfg);
  const auto path = compute_optima_path(p);
  const auto constants = problem_constants(p, cfg.alpha);
  const auto report = evaluate_tracking_bounds(trace, path, constants, 0.0, 0.0, 0.0);

  const auto* unrolled = report.find("unrolled_tracking");
  REQUIRE(unrolled != nullptr);
  const double d0 = (trace.x0 - path.optima[0]).norm();
  for (size_t i = 0; i < unrolled->rhs.size(); ++i) {
    // With no drift and no errors the unrolled bound is a pure geometric decay.
    CHECK(unrolled->rhs[i] ==
          doctest::Approx(std::pow(0.5, static_cast<double>(i + 1)) * d0).epsilon(1e-12));
  }
  for (const auto& check : report.checks) {
    CHECK(check.applicable);
    CHECK(check.satisfied);
  }
}

TEST_CASE("unrolled bound equals the product form") {
  QuadraticBoxParams params;
  params.dimension = 4;
  params.horizon = 30;
  params.drift.kind = DriftKind::RandomWalk;
  params.drift.step = 0.1;
  params.seed = 66;
  const auto p = gen_quadratic_box(params);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.x0 = Vec::Zero(4);
  cfg.seed = 67;
  cfg.gradient.model = GradModel::BoundedNoise;
  cfg.gradient.noise_level = 0.1;
  cfg.prox.mode = ProxMode::Perturbed;
  cfg.prox.eps.constant = 0.03;
  const auto trace = run(p, cfg);
  const auto path = compute_optima_path(p);
  const auto constants = problem_constants(p, cfg.alpha);
  const auto report = evaluate_tracking_bounds(trace, path, constants, 0.1, 0.03,
                                               measured_max_drift(path));
  const auto* unrolled = report.find("unrolled_tracking");
  REQUIRE(unrolled != nullptr);

  // Independent oracle: the explicit product-form coefficients.
  const double d0 = (trace.x0 - path.optima[0]).norm();
  for (size_t k = 0; k < trace.records.size(); ++k) {
    double decay = d0;
    for (size_t i = 0; i <= k; ++i) decay *= constants.rho_k[i];
    double drift_sum = 0.0, error_sum = 0.0;
    for (size_t i = 0; i <= k; ++i) {
      double tail = 1.0;
      for (size_t l = i; l <= k; ++l) tail *= constants.rho_k[l];
      drift_sum += tail * path.drift[i];
      double tail_open = 1.0;
      for (size_t l = i + 1; l <= k; ++l) tail_open *= constants.rho_k[l];
      error_sum += tail_open * (cfg.alpha * trace.records[i].grad_error_norm +
                                trace.records[i].eps);
    }
    const double product_form = decay + drift_sum + error_sum;
    CHECK(unrolled->rhs[k] == doctest::Approx(product_form).epsilon(1e-12));
  }
}

TEST_CASE("steady-state bound assembles its constants") {
  // rho = 0.9 via mu = 1, L = 19, alpha = 0.1; inputs chosen so the numerator
  // is 0.5 + 0.9 * 0.7.
  Vec q(2);
  q << 1.0, 19.0;
  auto p = static_diag_quadratic(q, 300);
  SolverConfig cfg;
  cfg.alpha = 0.1;
  cfg.x0 = Vec::Constant(2, 0.5);
  const auto trace = run(p, cfg);
  const auto path = compute_optima_path(p);
  const auto constants = problem_constants(p, cfg.alpha);
  CHECK(constants.rho == doctest::Approx(0.9));
  const auto report = evaluate_tracking_bounds(trace, path, constants,
                                               /*gamma_grad=*/2.0,
                                               /*gamma_prox=*/0.3,
                                               /*sigma_bound=*/0.7);
  const auto* steady = report.find("steady_state_tracking");
  REQUIRE(steady != nullptr);
  REQUIRE(steady->applicable);
  CHECK(steady->rhs.back() == doctest::Approx(11.3).epsilon(1e-12));
}

TEST_CASE("large steps disable the contraction-based bounds") {
  auto p = static_diag_quadratic(Vec::Ones(2), 5);
  SolverConfig cfg;
  cfg.alpha = 2.0;  // alpha >= 2/L
  cfg.x0 = Vec::Ones(2);
  const auto trace = run(p, cfg);
  const auto path = compute_optima_path(p);
  const auto constants = problem_constants(p, cfg.alpha);
  const auto report = evaluate_tracking_bounds(trace, path, constants, 0, 0, 0);
  CHECK_FALSE(report.find("cumulative_tracking")->applicable);
  CHECK_FALSE(report.find("steady_state_tracking")->applicable);
  CHECK(report.all_applicable_satisfied());
}

TEST_CASE("regret bounds") {
  SUBCASE("static exact run from the optimum has zero regret and zero bound") {
    QuadraticBoxParams params;
    params.dimension = 2;
    params.horizon = 10;
    params.seed = 68;
    const auto p = gen_quadratic_box(params);
    SolverConfig cfg;
    cfg.alpha = 0.5;
    cfg.x0 = p.analytic_optimum(1);
    const auto trace = run(p, cfg);
    const auto path = compute_optima_path(p);
    const auto constants = problem_constants(p, cfg.alpha, {}, true, false);
    const auto report = evaluate_regret_bounds(p, trace, path, constants,
                                               error_aggregates(trace));
    const auto* sc = report.find("regret_strongly_convex");
    REQUIRE(sc != nullptr);
    REQUIRE(sc->applicable);
    CHECK(sc->satisfied);
    CHECK(sc->lhs.back() == doctest::Approx(0.0));
    CHECK(sc->rhs.back() == doctest::Approx(0.0));
  }

  SUBCASE("compact-convex bound carries the per-step diameter term") {
    QuadraticBoxParams params;
    params.dimension = 2;
    params.horizon = 20;
    params.q_min = 0.0;  // merely convex
    params.q_max = 2.0;
    params.box_lo = -1.0;
    params.box_hi = 1.0;
    params.seed = 69;
    const auto p = gen_quadratic_box(params);
    SolverConfig cfg;
    cfg.alpha = 0.25;  // beta = 1/alpha - inf L = 4 - 2 = 2
    cfg.x0 = Vec::Zero(2);
    const auto trace = run(p, cfg);
    const auto path = compute_optima_path(p, ReferenceParams{1e-10, 1000000});
    const auto constants = problem_constants(p, cfg.alpha, {}, true, false);
    const auto report = evaluate_regret_bounds(p, trace, path, constants,
                                               error_aggregates(trace));
    const auto* cvx = report.find("regret_convex_compact");
    REQUIRE(cvx != nullptr);
    REQUIRE(cvx->applicable);
    CHECK(cvx->satisfied);
    const double beta = 1.0 / cfg.alpha - constants.lipschitz_inf;
    const double r2 = constants.diameter * constants.diameter;
    // Error-free static run: the bound grows by exactly beta R^2 per step.
    CHECK(cvx->rhs[19] - cvx->rhs[9] >=
          10.0 * beta * r2 * (1.0 - 1e-12));
  }

  SUBCASE("seeded convex compact instance satisfies the bound for every k") {
    QuadraticBoxParams params;
    params.dimension = 4;
    params.horizon = 60;
    params.q_min = 0.0;
    params.q_max = 2.0;
    params.box_lo = -2.0;
    params.box_hi = 2.0;
    params.drift.kind = DriftKind::Sinusoid;
    params.drift.step = 0.4;
    params.drift.period = 20.0;
    params.seed = 70;
    const auto p = gen_quadratic_box(params);
    SolverConfig cfg;
    cfg.alpha = 0.5;  // exactly 1/sup L
    cfg.x0 = Vec::Zero(4);
    cfg.seed = 71;
    cfg.gradient.model = GradModel::BoundedNoise;
    cfg.gradient.noise_level = 0.1;
    cfg.prox.mode = ProxMode::InteriorInexact;
    cfg.prox.eps.constant = 0.05;
    const auto trace = run(p, cfg);
    REQUIRE_FALSE(trace.error.has_value());
    const auto path = compute_optima_path(p, ReferenceParams{1e-10, 1000000});
    const auto constants = problem_constants(p, cfg.alpha, {}, true, false);
    const auto report = evaluate_regret_bounds(p, trace, path, constants,
                                               error_aggregates(trace));
    const auto* cvx = report.find("regret_convex_compact");
    REQUIRE(cvx->applicable);
    CHECK(cvx->violations == 0);
    const auto* sc = report.find("regret_strongly_convex");
    CHECK_FALSE(sc->applicable);  // no strong convexity here
    for (size_t i = 1; i < cvx->rhs.size(); ++i) {
      CHECK(cvx->lhs[i] >= cvx->lhs[i - 1] - 1e-12);  // regret is a sum of gaps
      CHECK(cvx->rhs[i] >= cvx->rhs[i - 1] - 1e-12);  // bound terms accumulate
    }
  }
}
