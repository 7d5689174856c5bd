#pragma once

#include <set>

#include "oipg/analysis.hpp"
#include "oipg/config.hpp"
#include "oipg/generators.hpp"
#include "oipg/trace_io.hpp"

namespace oipg {

struct AnalysisOptions {
  std::set<std::string> bounds;   // resolved bound names
  double reference_tol = 1e-8;
  bool baseline = false;          // also run the exact-oracle reference method
  std::optional<double> gamma_grad;   // absent = measured
  std::optional<double> gamma_prox;
  std::optional<double> sigma_bound;
};

/// Parsed experiment: generator selection plus solver/oracle/analysis
/// settings. Seeds must be explicit in the document (or injected through
/// override_master_seed); there is no ambient randomness.
struct ExperimentConfig {
  KeyValueDoc doc;  // canonical document (hashing, problem emission)

  std::string generator;
  std::uint64_t problem_seed = 0;
  QuadraticBoxParams quadratic;
  LassoStreamParams lasso;
  NetworkTopology topology;
  NetworkFlowParams network;
  int network_horizon = 0;

  SolverConfig solver;     // x0 filled at run time from x0_mode
  std::string x0_mode;     // "zeros", "anchor", or an explicit list
  AnalysisOptions analysis;
  std::string out_dir;
};

ExperimentConfig parse_experiment_config(const KeyValueDoc& doc);

/// Replaces every section seed with streams derived from one master seed.
void override_master_seed(ExperimentConfig& config, std::uint64_t seed);

TimeVaryingProblem build_problem(const ExperimentConfig& config);
Vec resolve_x0(const ExperimentConfig& config, const TimeVaryingProblem& problem);

/// The problem document emitted by `make-problem`: the generator sections of
/// the config plus derived constants; enough to regenerate the identical
/// problem.
KeyValueDoc make_problem_document(const ExperimentConfig& config,
                                  const TimeVaryingProblem& problem);

struct ExperimentResult {
  int exit_code = 0;               // 0 bounds ok, 1 violation, 3 runtime failure
  std::string summary_json;
  std::string trace_csv;           // main run
  std::string baseline_csv;        // empty unless a baseline ran
  RunTrace trace;
  BoundReport bounds;
};

/// Generator -> run(s) -> analysis -> serialized trace + summary. Writes
/// trace.csv, trace_exact.csv (baseline) and summary.json under out_dir when
/// out_dir is nonempty.
ExperimentResult run_experiment(const ExperimentConfig& config, bool quiet = false);

/// Re-evaluates the bounds against an existing trace CSV produced with the
/// same config; rewrites the bound columns and the summary.
ExperimentResult reevaluate_bounds(const ExperimentConfig& config,
                                   const std::string& trace_path, bool quiet = false);

/// All tracking/regret bound names, in report order.
const std::vector<std::string>& known_bound_names();

}  // namespace oipg
