#include "oipg/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace oipg {

namespace {

using nlohmann::json;

GradModel parse_grad_model(const std::string& name) {
  if (name == "exact") return GradModel::Exact;
  if (name == "bounded-noise") return GradModel::BoundedNoise;
  if (name == "zeroth-order") return GradModel::ZerothOrder;
  throw ConfigError("unknown gradient oracle '" + name + "'");
}

ProxMode parse_prox_mode(const std::string& name) {
  if (name == "exact") return ProxMode::Exact;
  if (name == "perturbed") return ProxMode::Perturbed;
  if (name == "interior-inexact") return ProxMode::InteriorInexact;
  if (name == "restricted-margin") return ProxMode::RestrictedMargin;
  if (name == "budgeted") return ProxMode::Budgeted;
  throw ConfigError("unknown prox mode '" + name + "'");
}

DriftModel parse_drift(const KeyValueDoc& doc) {
  DriftModel drift;
  const std::string kind = doc.get_or("problem", "drift", "none");
  if (kind == "none") drift.kind = DriftKind::None;
  else if (kind == "constant") drift.kind = DriftKind::Constant;
  else if (kind == "random-walk") drift.kind = DriftKind::RandomWalk;
  else if (kind == "sinusoid") drift.kind = DriftKind::Sinusoid;
  else throw ConfigError("unknown drift model '" + kind + "'");
  drift.step = doc.get_double_or("problem", "drift_step", 0.0);
  drift.period = doc.get_double_or("problem", "drift_period", 100.0);
  return drift;
}

std::pair<int, int> parse_arrow(const std::string& item) {
  const auto pos = item.find('>');
  if (pos == std::string::npos) {
    throw ConfigError("expected 'a>b' pair, got '" + item + "'");
  }
  try {
    return {std::stoi(item.substr(0, pos)), std::stoi(item.substr(pos + 1))};
  } catch (const std::exception&) {
    throw ConfigError("bad node index in '" + item + "'");
  }
}

NetworkTopology parse_topology(const KeyValueDoc& doc) {
  if (!doc.has_section("topology")) return NetworkTopology::default_six_node();
  NetworkTopology topo;
  topo.node_count = doc.get_int_or("topology", "nodes", 6);
  for (const auto& item : split_list(doc.get("topology", "edges"))) {
    topo.edges.push_back(parse_arrow(item));
  }
  for (const auto& item : split_list(doc.get("topology", "flows"))) {
    const auto [src, dst] = parse_arrow(item);
    topo.flows.push_back({src, dst});
  }
  topo.validate();
  return topo;
}

std::set<std::string> parse_bounds(const std::string& value) {
  std::set<std::string> bounds;
  for (const auto& item : split_list(value)) {
    if (item == "none") return {};
    if (item == "all") {
      for (const auto& name : known_bound_names()) bounds.insert(name);
    } else if (item == "tracking") {
      bounds.insert({"step_tracking", "unrolled_tracking", "cumulative_tracking",
                     "steady_state_tracking"});
    } else if (item == "regret") {
      bounds.insert({"regret_strongly_convex", "regret_convex_compact"});
    } else {
      bool known = false;
      for (const auto& name : known_bound_names()) known = known || name == item;
      if (!known) throw ConfigError("unknown bound '" + item + "'");
      bounds.insert(item);
    }
  }
  return bounds;
}

std::optional<double> parse_measured_or_value(const KeyValueDoc& doc,
                                              const std::string& key) {
  const std::string value = doc.get_or("analysis", key, "measured");
  if (value == "measured") return std::nullopt;
  return doc.get_double("analysis", key);
}

}  // namespace

const std::vector<std::string>& known_bound_names() {
  static const std::vector<std::string> names = {
      "step_tracking",        "unrolled_tracking",
      "cumulative_tracking",  "steady_state_tracking",
      "regret_strongly_convex", "regret_convex_compact"};
  return names;
}

ExperimentConfig parse_experiment_config(const KeyValueDoc& doc) {
  ExperimentConfig cfg;
  cfg.doc = doc;

  cfg.generator = doc.get("problem", "generator");
  cfg.problem_seed = doc.get_u64("problem", "seed");  // seeds must be explicit
  const int horizon = doc.get_int_or("problem", "horizon", 100);
  if (horizon < 1) throw ConfigError("[problem] horizon must be >= 1");

  if (cfg.generator == "quadratic-box") {
    auto& q = cfg.quadratic;
    q.dimension = doc.get_int_or("problem", "n", 2);
    q.horizon = horizon;
    q.q_min = doc.get_double_or("problem", "q_min", 0.5);
    q.q_max = doc.get_double_or("problem", "q_max", 2.0);
    q.box_lo = doc.get_double_or("problem", "box_lo", -5.0);
    q.box_hi = doc.get_double_or("problem", "box_hi", 5.0);
    q.drift = parse_drift(doc);
    q.seed = cfg.problem_seed;
  } else if (cfg.generator == "lasso-stream") {
    auto& l = cfg.lasso;
    l.dimension = doc.get_int_or("problem", "n", 2);
    l.horizon = horizon;
    l.weight = doc.get_double_or("problem", "l1_weight", 0.5);
    l.drift = parse_drift(doc);
    l.seed = cfg.problem_seed;
  } else if (cfg.generator == "network-flow") {
    cfg.topology = parse_topology(doc);
    cfg.network_horizon = horizon;
    auto& net = cfg.network;
    net.nu = doc.get_double_or("problem", "nu", 0.1);
    net.z_max = doc.get_double_or("problem", "z_max", 5.0);
    net.margin = doc.get_double_or("problem", "margin", 0.05);
    net.kappa_init = doc.get_double_or("problem", "kappa", 1.0);
    net.kappa_walk_std = doc.get_double_or("problem", "kappa_walk_std", 0.03);
    net.gain_variance = doc.get_double_or("problem", "gain_variance", 1e-2);
    net.power_variance = doc.get_double_or("problem", "power_variance", 1e-3);
    net.exogenous_variance = doc.get_double_or("problem", "exogenous_variance", 1e-2);
  } else {
    throw ConfigError("unknown generator '" + cfg.generator + "'");
  }

  auto& solver = cfg.solver;
  solver.alpha = doc.get_double("solver", "alpha");
  solver.horizon = doc.get_int_or("solver", "horizon", 0);
  solver.seed = doc.get_u64("solver", "seed");
  cfg.x0_mode = doc.get_or("solver", "x0", "default");

  auto& grad = solver.gradient;
  grad.model = parse_grad_model(doc.get_or("gradient", "oracle", "exact"));
  grad.noise_level = doc.get_double_or("gradient", "gamma_e", 0.0);
  grad.zeroth_order.total_evaluations = doc.get_int_or("gradient", "points", 21);
  grad.zeroth_order.radius = doc.get_double_or("gradient", "radius", 0.01);
  grad.zeroth_order.antithetic = doc.get_bool_or("gradient", "antithetic", false);
  grad.rng_seed = doc.has("gradient", "seed") ? doc.get_u64("gradient", "seed") : 0;

  auto& prox = solver.prox;
  prox.mode = parse_prox_mode(doc.get_or("prox", "mode", "exact"));
  if (doc.has("prox", "eps")) {
    const auto items = split_list(doc.get("prox", "eps"));
    if (items.size() == 1) {
      prox.eps.constant = doc.get_double("prox", "eps");
    } else {
      for (const auto& item : items) prox.eps.per_step.push_back(std::stod(item));
    }
  }
  prox.margin = doc.get_double_or("prox", "margin", cfg.network.margin);
  prox.inner_budget = doc.get_int_or("prox", "inner_budget", 0);
  prox.rng_seed = doc.has("prox", "seed") ? doc.get_u64("prox", "seed") : 0;

  cfg.analysis.bounds = parse_bounds(doc.get_or("analysis", "bounds", "all"));
  cfg.analysis.reference_tol = doc.get_double_or("analysis", "reference_tol", 1e-8);
  cfg.analysis.baseline = doc.get_bool_or("analysis", "baseline", false);
  cfg.analysis.gamma_grad = parse_measured_or_value(doc, "gamma_e");
  cfg.analysis.gamma_prox = parse_measured_or_value(doc, "gamma_eps");
  cfg.analysis.sigma_bound = parse_measured_or_value(doc, "sigma");

  cfg.out_dir = doc.get_or("output", "dir", "");
  return cfg;
}

void override_master_seed(ExperimentConfig& config, std::uint64_t seed) {
  config.problem_seed = Rng::mix(seed, 1);
  config.quadratic.seed = config.problem_seed;
  config.lasso.seed = config.problem_seed;
  config.solver.seed = Rng::mix(seed, 2);
  config.solver.gradient.rng_seed = Rng::mix(seed, 3);
  config.solver.prox.rng_seed = Rng::mix(seed, 4);
  config.doc.set("problem", "seed", std::to_string(config.problem_seed));
  config.doc.set("solver", "seed", std::to_string(config.solver.seed));
  config.doc.set("gradient", "seed", std::to_string(config.solver.gradient.rng_seed));
  config.doc.set("prox", "seed", std::to_string(config.solver.prox.rng_seed));
}

TimeVaryingProblem build_problem(const ExperimentConfig& config) {
  TimeVaryingProblem problem;
  if (config.generator == "quadratic-box") {
    problem = gen_quadratic_box(config.quadratic);
  } else if (config.generator == "lasso-stream") {
    problem = gen_lasso_stream(config.lasso);
  } else if (config.generator == "network-flow") {
    problem = gen_network_flow(config.topology, config.network_horizon, config.network,
                               config.problem_seed);
  } else {
    throw ConfigError("unknown generator '" + config.generator + "'");
  }
  problem.sampling_interval = config.doc.get_double_or("problem", "delta", 1.0);
  if (!(problem.sampling_interval > 0)) {
    throw ConfigError("[problem] delta must be positive");
  }
  return problem;
}

Vec resolve_x0(const ExperimentConfig& config, const TimeVaryingProblem& problem) {
  const std::string& mode = config.x0_mode;
  if (mode == "zeros") return Vec::Zero(problem.dimension);
  if (mode == "anchor" || mode == "default") {
    const auto& h1 = problem.h(1);
    if (h1.has_indicator()) return h1.feasible_set->interior_anchor();
    if (mode == "anchor") throw ConfigError("x0 = anchor needs a feasible set");
    return Vec::Zero(problem.dimension);
  }
  const auto items = split_list(mode);
  if (static_cast<int>(items.size()) != problem.dimension) {
    throw ConfigError("x0 list has wrong dimension");
  }
  Vec x0(problem.dimension);
  for (size_t i = 0; i < items.size(); ++i) {
    try {
      x0[static_cast<int>(i)] = std::stod(items[i]);
    } catch (const std::exception&) {
      throw ConfigError("bad x0 entry '" + items[i] + "'");
    }
  }
  return x0;
}

KeyValueDoc make_problem_document(const ExperimentConfig& config,
                                  const TimeVaryingProblem& problem) {
  KeyValueDoc doc;
  doc.set("problem", "generator", config.generator);
  doc.set("problem", "seed", std::to_string(config.problem_seed));
  doc.set("problem", "horizon", std::to_string(problem.horizon));
  if (config.generator == "quadratic-box") {
    doc.set("problem", "n", std::to_string(config.quadratic.dimension));
    doc.set_double("problem", "q_min", config.quadratic.q_min);
    doc.set_double("problem", "q_max", config.quadratic.q_max);
    doc.set_double("problem", "box_lo", config.quadratic.box_lo);
    doc.set_double("problem", "box_hi", config.quadratic.box_hi);
  } else if (config.generator == "lasso-stream") {
    doc.set("problem", "n", std::to_string(config.lasso.dimension));
    doc.set_double("problem", "l1_weight", config.lasso.weight);
  } else if (config.generator == "network-flow") {
    doc.set_double("problem", "nu", config.network.nu);
    doc.set_double("problem", "z_max", config.network.z_max);
    doc.set_double("problem", "margin", config.network.margin);
    doc.set_double("problem", "kappa", config.network.kappa_init);
    std::string edges, flows;
    for (const auto& [a, b] : config.topology.edges) {
      if (!edges.empty()) edges += ", ";
      edges += std::to_string(a) + ">" + std::to_string(b);
    }
    for (const auto& f : config.topology.flows) {
      if (!flows.empty()) flows += ", ";
      flows += std::to_string(f.source) + ">" + std::to_string(f.destination);
    }
    doc.set("topology", "nodes", std::to_string(config.topology.node_count));
    doc.set("topology", "edges", edges);
    doc.set("topology", "flows", flows);
  }
  if (config.doc.has("problem", "drift")) {
    doc.set("problem", "drift", config.doc.get("problem", "drift"));
    doc.set("problem", "drift_step", config.doc.get_or("problem", "drift_step", "0"));
    doc.set("problem", "drift_period", config.doc.get_or("problem", "drift_period", "100"));
  }
  doc.set("derived", "dimension", std::to_string(problem.dimension));
  doc.set_double("derived", "lipschitz_sup", problem.sup_lipschitz());
  doc.set_double("derived", "strong_convexity_inf", problem.inf_strong_convexity());
  return doc;
}

namespace {

struct RunAnalysis {
  TrackingSeries tracking;
  std::vector<double> regret;
  ErrorAggregates aggregates;
  BoundReport bounds;
};

RunAnalysis analyze_run(const TimeVaryingProblem& problem, const RunTrace& trace,
                        const OptimaPath& path, const ProblemConstants& constants,
                        const AnalysisOptions& options) {
  RunAnalysis analysis;
  analysis.tracking = tracking_series(trace, path);
  analysis.regret = regret_series(problem, trace, path);
  analysis.aggregates = error_aggregates(trace);

  const bool want_tracking =
      options.bounds.count("step_tracking") + options.bounds.count("unrolled_tracking") +
          options.bounds.count("cumulative_tracking") +
          options.bounds.count("steady_state_tracking") >
      0;
  const bool want_regret = options.bounds.count("regret_strongly_convex") +
                               options.bounds.count("regret_convex_compact") >
                           0;

  if (want_tracking) {
    const double gamma_grad =
        options.gamma_grad.value_or(measured_max_grad_error(trace));
    const double gamma_prox = options.gamma_prox.value_or(measured_max_prox_eps(trace));
    const double sigma_bound = options.sigma_bound.value_or(measured_max_drift(path));
    BoundReport tracking_bounds = evaluate_tracking_bounds(
        trace, path, constants, gamma_grad, gamma_prox, sigma_bound);
    for (auto& check : tracking_bounds.checks) {
      if (options.bounds.count(check.name) > 0) {
        analysis.bounds.checks.push_back(std::move(check));
      }
    }
  }
  if (want_regret) {
    BoundReport regret_bounds = evaluate_regret_bounds(problem, trace, path, constants,
                                                       analysis.aggregates);
    for (auto& check : regret_bounds.checks) {
      if (options.bounds.count(check.name) > 0) {
        analysis.bounds.checks.push_back(std::move(check));
      }
    }
  }
  return analysis;
}

json bounds_to_json(const BoundReport& report) {
  json out = json::array();
  for (const auto& check : report.checks) {
    json node;
    node["bound"] = check.name;
    node["applicable"] = check.applicable;
    if (!check.note.empty()) node["note"] = check.note;
    if (check.applicable) {
      size_t checked = check.checked.empty()
                           ? check.lhs.size()
                           : static_cast<size_t>(std::count(check.checked.begin(),
                                                            check.checked.end(), true));
      node["steps_checked"] = checked;
      node["violations"] = check.violations;
      node["max_ratio"] = check.max_ratio;
      node["satisfied"] = check.satisfied;
    }
    out.push_back(std::move(node));
  }
  return out;
}

json run_to_json(const RunTrace& trace, const RunAnalysis& analysis,
                 const OptimaPath& path) {
  json out;
  out["seed"] = trace.config.seed;
  out["rng"] = trace.rng_algorithm;
  out["steps"] = trace.records.size();
  out["warnings"] = trace.warnings;
  if (trace.error) {
    out["error"] = {{"k", trace.error->k}, {"message", trace.error->message}};
  }
  json measured;
  measured["sigma_max"] = measured_max_drift(path);
  measured["grad_error_max"] = measured_max_grad_error(trace);
  measured["prox_eps_max"] = measured_max_prox_eps(trace);
  out["measured"] = std::move(measured);
  if (!trace.records.empty()) {
    json final_values;
    final_values["tracking_error"] = analysis.tracking.error.back();
    final_values["running_avg"] = analysis.tracking.running_avg.back();
    final_values["regret"] = analysis.regret.back();
    out["final"] = std::move(final_values);
    out["running_avg_final_quarter_rel_change"] =
        final_quarter_relative_change(analysis.tracking.running_avg);
  }
  out["bounds"] = bounds_to_json(analysis.bounds);
  return out;
}

std::vector<const BoundCheck*> csv_bound_columns(const BoundReport& report) {
  std::vector<const BoundCheck*> columns;
  for (const auto& check : report.checks) {
    if (check.applicable && !check.rhs.empty()) columns.push_back(&check);
  }
  return columns;
}

void emit(bool quiet, const std::string& line) {
  if (!quiet) std::cout << line << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool quiet) {
  ExperimentResult result;
  const TimeVaryingProblem problem = build_problem(config);
  for (const auto& note : problem.notes) emit(quiet, "note: " + note);

  SolverConfig solver = config.solver;
  solver.x0 = resolve_x0(config, problem);
  result.trace = run(problem, solver);
  for (const auto& warning : result.trace.warnings) emit(quiet, "warning: " + warning);

  json summary;
  summary["schema"] = "oipg-summary-v1";
  summary["config_hash"] = content_hash(config.doc.serialize());
  summary["generator"] = config.generator;
  summary["problem"] = {{"dimension", problem.dimension},
                        {"horizon", problem.horizon},
                        {"lipschitz_sup", problem.sup_lipschitz()},
                        {"strong_convexity_inf", problem.inf_strong_convexity()},
                        {"notes", problem.notes}};

  if (result.trace.error) {
    emit(quiet, "error at step " + std::to_string(result.trace.error->k) + ": " +
                    result.trace.error->message);
    summary["run"] = {{"error",
                       {{"k", result.trace.error->k},
                        {"message", result.trace.error->message}}}};
    result.exit_code = 3;
    result.summary_json = summary.dump(2);
  } else {
    const ReferenceParams ref{config.analysis.reference_tol, 1000000};
    const OptimaPath path = compute_optima_path(problem, ref);
    const bool all_sets =
        std::all_of(problem.nonsmooth.begin(), problem.nonsmooth.end(),
                    [](const NonsmoothCost& h) { return h.has_indicator(); });
    const ProblemConstants constants =
        problem_constants(problem, solver.alpha, {}, all_sets, false);

    const RunAnalysis analysis = analyze_run(problem, result.trace, path, constants,
                                             config.analysis);
    result.bounds = analysis.bounds;
    result.trace_csv = write_csv(make_trace_table(result.trace, analysis.tracking,
                                                  analysis.regret,
                                                  csv_bound_columns(analysis.bounds)));

    summary["constants"] = {{"alpha", constants.alpha},
                            {"rho", constants.rho},
                            {"contractive", constants.contractive},
                            {"lipschitz_sup", constants.lipschitz_sup},
                            {"strong_convexity_inf", constants.strong_convexity_inf}};
    if (constants.diameter_valid) summary["constants"]["diameter"] = constants.diameter;
    summary["optimum_path"] = {{"method", path.method},
                               {"length_final", path.path_length.back()}};
    summary["run"] = run_to_json(result.trace, analysis, path);

    if (config.analysis.baseline) {
      SolverConfig baseline_cfg = solver;
      baseline_cfg.gradient = GradientOracleConfig{};
      baseline_cfg.prox = ProxOracleConfig{};
      RunTrace baseline = run(problem, baseline_cfg);
      if (baseline.error) {
        summary["baseline"] = {{"error",
                                {{"k", baseline.error->k},
                                 {"message", baseline.error->message}}}};
        result.exit_code = 3;
      } else {
        const RunAnalysis baseline_analysis =
            analyze_run(problem, baseline, path, constants, config.analysis);
        result.baseline_csv = write_csv(make_trace_table(
            baseline, baseline_analysis.tracking, baseline_analysis.regret, {}));
        summary["baseline"] = run_to_json(baseline, baseline_analysis, path);
      }
    }

    for (const auto& check : result.bounds.checks) {
      if (!check.applicable) {
        emit(quiet, "bound " + check.name + ": " + check.note);
      } else {
        emit(quiet, "bound " + check.name + ": " +
                        (check.satisfied ? "satisfied" : "VIOLATED") + " (" +
                        std::to_string(check.violations) + " violations, max ratio " +
                        std::to_string(check.max_ratio) + ")");
      }
    }
    if (result.exit_code == 0 && !result.bounds.all_applicable_satisfied()) {
      result.exit_code = 1;
    }
    summary["exit_code"] = result.exit_code;
    result.summary_json = summary.dump(2);
  }

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    if (!result.trace_csv.empty()) {
      std::ofstream(fs::path(config.out_dir) / "trace.csv", std::ios::binary)
          << result.trace_csv;
    }
    if (!result.baseline_csv.empty()) {
      std::ofstream(fs::path(config.out_dir) / "trace_exact.csv", std::ios::binary)
          << result.baseline_csv;
    }
    std::ofstream(fs::path(config.out_dir) / "summary.json") << result.summary_json
                                                             << '\n';
  }
  return result;
}

ExperimentResult reevaluate_bounds(const ExperimentConfig& config,
                                   const std::string& trace_path, bool quiet) {
  const TimeVaryingProblem problem = build_problem(config);
  const TraceTable table = read_csv_file(trace_path);

  RunTrace trace;
  trace.config = config.solver;
  trace.x0 = repaired_initial_point(problem, resolve_x0(config, problem), nullptr);
  const auto k_col = column(table, "k");
  const auto err_col = column(table, "err_norm_e");
  const auto eps_col = column(table, "eps_k");
  const auto gap_col = column(table, "eps_gap_k");
  const auto f_col = column(table, "f_xk");
  std::vector<std::vector<double>> x_cols(static_cast<size_t>(problem.dimension));
  for (int j = 0; j < problem.dimension; ++j) {
    x_cols[static_cast<size_t>(j)] = column(table, "x" + std::to_string(j));
  }
  trace.records.resize(table.rows.size());
  for (size_t i = 0; i < table.rows.size(); ++i) {
    auto& rec = trace.records[i];
    rec.k = static_cast<int>(k_col[i]);
    rec.grad_error_norm = err_col[i];
    rec.eps = eps_col[i];
    rec.eps_gap = gap_col[i];
    rec.objective = f_col[i];
    rec.x.resize(problem.dimension);
    for (int j = 0; j < problem.dimension; ++j) {
      rec.x[j] = x_cols[static_cast<size_t>(j)][i];
    }
  }

  const int steps = static_cast<int>(trace.records.size());
  TimeVaryingProblem trimmed = problem;
  if (steps < problem.horizon) {
    trimmed.horizon = steps;
    trimmed.smooth.resize(static_cast<size_t>(steps));
    trimmed.nonsmooth.resize(static_cast<size_t>(steps));
  }

  const ReferenceParams ref{config.analysis.reference_tol, 1000000};
  const OptimaPath path = compute_optima_path(trimmed, ref);
  const bool all_sets =
      std::all_of(trimmed.nonsmooth.begin(), trimmed.nonsmooth.end(),
                  [](const NonsmoothCost& h) { return h.has_indicator(); });
  const ProblemConstants constants =
      problem_constants(trimmed, config.solver.alpha, {}, all_sets, false);
  const RunAnalysis analysis =
      analyze_run(trimmed, trace, path, constants, config.analysis);

  ExperimentResult result;
  result.trace = trace;
  result.bounds = analysis.bounds;
  result.trace_csv = write_csv(make_trace_table(trace, analysis.tracking, analysis.regret,
                                                csv_bound_columns(analysis.bounds)));
  json summary;
  summary["schema"] = "oipg-summary-v1";
  summary["config_hash"] = content_hash(config.doc.serialize());
  summary["reevaluated_from"] = trace_path;
  summary["run"] = run_to_json(trace, analysis, path);
  result.exit_code = result.bounds.all_applicable_satisfied() ? 0 : 1;
  summary["exit_code"] = result.exit_code;
  result.summary_json = summary.dump(2);

  for (const auto& check : result.bounds.checks) {
    if (check.applicable) {
      emit(quiet, "bound " + check.name + ": " +
                      (check.satisfied ? "satisfied" : "VIOLATED"));
    }
  }
  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    std::ofstream(fs::path(config.out_dir) / "trace_bounds.csv", std::ios::binary)
        << result.trace_csv;
    std::ofstream(fs::path(config.out_dir) / "summary.json") << result.summary_json << '\n';
  }
  return result;
}

}  // namespace oipg
