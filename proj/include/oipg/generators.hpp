#pragma once

#include "oipg/problem.hpp"

namespace oipg {

enum class DriftKind { None, Constant, RandomWalk, Sinusoid };

/// Drift of the data vector b_k between consecutive times.
struct DriftModel {
  DriftKind kind = DriftKind::None;
  double step = 0.0;      // per-step shift length / max walk step / amplitude
  double period = 100.0;  // sinusoid period in steps

  void validate() const {
    if (step < 0) throw std::invalid_argument("drift: negative step");
    if (kind == DriftKind::Sinusoid && !(period > 0)) {
      throw std::invalid_argument("drift: sinusoid needs a positive period");
    }
  }
};

/// Diagonal quadratic over a box: g_k = 0.5 (x - b_k)' Q (x - b_k) with
/// Q = diag(q), q in [q_min, q_max] (endpoints pinned), h the box indicator.
/// The clamp minimizer is exposed analytically when q_min > 0.
struct QuadraticBoxParams {
  int dimension = 2;
  int horizon = 10;
  double q_min = 0.5;
  double q_max = 2.0;
  double box_lo = -5.0;
  double box_hi = 5.0;
  DriftModel drift;
  std::uint64_t seed = 0;
};

TimeVaryingProblem gen_quadratic_box(const QuadraticBoxParams& params);

/// Streaming l1-regularized least squares: g_k = 0.5 ||x - b_k||^2,
/// h = weight * ||.||_1, minimizer = soft threshold of b_k.
struct LassoStreamParams {
  int dimension = 2;
  int horizon = 10;
  double weight = 0.5;
  DriftModel drift;
  std::uint64_t seed = 0;
};

TimeVaryingProblem gen_lasso_stream(const LassoStreamParams& params);

struct TrafficFlow {
  int source = 0;
  int destination = 0;
};

/// Directed network with per-flow link-rate variables. Nodes are 0-based.
struct NetworkTopology {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // (tail, head)
  std::vector<TrafficFlow> flows;

  /// Node-by-edge incidence: +1 where the edge leaves the node, -1 where it
  /// enters. Net injection of flow s at node i is row i of T times x(s).
  Mat routing_matrix() const;
  void validate() const;

  /// Six nodes, eight directed links (a cycle plus two chords), two flows
  /// 0 -> 2 and 3 -> 5. Strongly connected, so every node can route to every
  /// destination.
  static NetworkTopology default_six_node();
};

struct NetworkFlowParams {
  double nu = 0.1;                  // quadratic regularization, also mu_k
  double z_max = 5.0;               // cap on per-flow source injection
  double margin = 0.05;             // restriction the capacity rows must admit
  double kappa_init = 1.0;          // initial utility weights at the sources
  double kappa_min = 0.5;
  double kappa_max = 1.5;
  double kappa_walk_std = 0.03;     // clipped random walk on the weights
  double gain_variance = 1e-2;      // channel gain noise, each part
  double power_variance = 1e-3;
  double exogenous_variance = 1e-2; // random-walk increments of w_k
  double exogenous_min = 0.1;
  double exogenous_max_fraction = 0.45;  // of the link capacity
};

/// Time-varying rate-control problem in the link-rate variable x (one block
/// per flow): concave log utilities at the sources, nu/2 ||x||^2, and a
/// per-k capacity polytope
///   0 <= sum_s x(e,s) + w_k(e) <= c_k(e)      (restrictable rows)
///   0 <= T_i x(s) for i != dst(s),  T_src x(s) <= z_max,  x >= 0.
/// Capacities come from a seeded channel-gain/power model; w_k follows a
/// clamped random walk; the utility weights follow a clipped random walk.
TimeVaryingProblem gen_network_flow(const NetworkTopology& topology, int horizon,
                                    const NetworkFlowParams& params,
                                    std::uint64_t seed);

}  // namespace oipg
