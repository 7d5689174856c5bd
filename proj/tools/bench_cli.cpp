// Experiment harness: problem generation, online runs, bound evaluation.
//
// Exit codes: 0 success (all applicable bounds satisfied), 1 bound violation,
// 2 configuration error, 3 runtime error.

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <iostream>
#include <thread>

#include "oipg/experiment.hpp"

namespace {

using namespace oipg;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* config = cmd->add_option("--config", args.config_path, "experiment config file");
  if (config_required) config->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "master seed overriding every section seed");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

ExperimentConfig load_config(const CommonArgs& args) {
  ExperimentConfig cfg = parse_experiment_config(KeyValueDoc::load(args.config_path));
  if (args.seed >= 0) override_master_seed(cfg, static_cast<std::uint64_t>(args.seed));
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

int cmd_make_problem(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args);
  const TimeVaryingProblem problem = build_problem(cfg);
  Rng rng(Rng::mix(cfg.problem_seed, 0x5a11));
  const ValidationReport report = validate_problem(problem, rng);
  for (const auto& failure : report.failures) {
    std::cerr << "validation: " << failure << '\n';
  }
  const KeyValueDoc doc = make_problem_document(cfg, problem);
  if (args.out_dir.empty()) {
    std::cout << doc.serialize();
  } else {
    std::filesystem::create_directories(args.out_dir);
    doc.save((std::filesystem::path(args.out_dir) / "problem.ini").string());
    if (!args.quiet) {
      std::cout << "wrote " << (std::filesystem::path(args.out_dir) / "problem.ini").string()
                << '\n';
    }
  }
  return report.ok() ? 0 : 3;
}

int cmd_run(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  return run_experiment(cfg, args.quiet).exit_code;
}

int cmd_bounds(const CommonArgs& args, const std::string& trace_path) {
  const ExperimentConfig cfg = load_config(args);
  return reevaluate_bounds(cfg, trace_path, args.quiet).exit_code;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == '.' || c == '-' || c == '+') c = '_';
  }
  return s;
}

int cmd_sweep(const CommonArgs& args) {
  const KeyValueDoc doc = KeyValueDoc::load(args.config_path);
  if (!doc.has_section("sweep")) {
    throw ConfigError("sweep: config has no [sweep] section");
  }
  const auto seeds = split_list(doc.get_or("sweep", "seeds", ""));
  const auto eps_values = split_list(doc.get_or("sweep", "eps", ""));
  const auto gamma_values = split_list(doc.get_or("sweep", "gamma_e", ""));
  auto axis = [](const std::vector<std::string>& v) {
    return v.empty() ? std::vector<std::string>{""} : v;
  };

  struct Job {
    std::string name;
    ExperimentConfig cfg;
  };
  std::vector<Job> jobs;
  for (const auto& seed : axis(seeds)) {
    for (const auto& eps : axis(eps_values)) {
      for (const auto& gamma : axis(gamma_values)) {
        KeyValueDoc variant = doc;
        std::string name = "run";
        if (!seed.empty()) {
          name += "_s" + seed;
        }
        if (!eps.empty()) {
          variant.set("prox", "eps", eps);
          name += "_eps" + sanitize(eps);
        }
        if (!gamma.empty()) {
          variant.set("gradient", "gamma_e", gamma);
          name += "_ge" + sanitize(gamma);
        }
        ExperimentConfig cfg = parse_experiment_config(variant);
        if (!seed.empty()) {
          override_master_seed(cfg, std::stoull(seed));
        } else if (args.seed >= 0) {
          override_master_seed(cfg, static_cast<std::uint64_t>(args.seed));
        }
        const std::string root = args.out_dir.empty() ? cfg.out_dir : args.out_dir;
        if (root.empty()) throw ConfigError("sweep: needs an output directory");
        cfg.out_dir = (std::filesystem::path(root) / name).string();
        jobs.push_back({name, std::move(cfg)});
      }
    }
  }

  // Independent pipelines, one output directory each.
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  int worst = 0;
  for (size_t begin = 0; begin < jobs.size(); begin += workers) {
    const size_t end = std::min(jobs.size(), begin + workers);
    std::vector<std::future<int>> batch;
    for (size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&jobs, i] {
        return run_experiment(jobs[i].cfg, /*quiet=*/true).exit_code;
      }));
    }
    for (size_t i = begin; i < end; ++i) {
      const int code = batch[i - begin].get();
      worst = std::max(worst, code);
      if (!args.quiet) {
        std::cout << jobs[i].name << ": exit " << code << '\n';
      }
    }
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online inexact proximal-gradient benchmark harness"};
  app.require_subcommand(1);

  CommonArgs make_args, run_args, sweep_args, bounds_args;
  std::string trace_path;

  auto* make_cmd = app.add_subcommand("make-problem", "emit a problem document");
  add_common(make_cmd, make_args);
  auto* run_cmd = app.add_subcommand("run", "execute one experiment");
  add_common(run_cmd, run_args);
  auto* sweep_cmd = app.add_subcommand("sweep", "grid over seeds / eps / gamma_e");
  add_common(sweep_cmd, sweep_args);
  auto* bounds_cmd = app.add_subcommand("bounds", "re-evaluate bounds on a trace CSV");
  bounds_cmd->add_option("trace", trace_path, "trace CSV path")->required();
  add_common(bounds_cmd, bounds_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (make_cmd->parsed()) return cmd_make_problem(make_args);
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (bounds_cmd->parsed()) return cmd_bounds(bounds_args, trace_path);
  } catch (const oipg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
