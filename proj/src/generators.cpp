#include "oipg/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <sstream>

namespace oipg {

namespace {

/// b_1..b_K under the configured drift, all generated up front so the costs
/// can share one immutable block.
std::vector<Vec> drift_sequence(Vec b1, const DriftModel& drift, int horizon, Rng& rng) {
  drift.validate();
  const int n = static_cast<int>(b1.size());
  std::vector<Vec> b;
  b.reserve(static_cast<size_t>(horizon));
  b.push_back(b1);
  Vec direction = Vec::Zero(n);
  if (drift.kind == DriftKind::Constant || drift.kind == DriftKind::Sinusoid) {
    direction = rng.unit_sphere(n);
  }
  for (int k = 2; k <= horizon; ++k) {
    switch (drift.kind) {
      case DriftKind::None:
        b.push_back(b1);
        break;
      case DriftKind::Constant:
        b.push_back(b1 + (k - 1) * drift.step * direction);
        break;
      case DriftKind::RandomWalk:
        b.push_back(b.back() + rng.uniform(0.0, drift.step) * rng.unit_sphere(n));
        break;
      case DriftKind::Sinusoid:
        b.push_back(b1 + drift.step *
                             std::sin(2.0 * std::numbers::pi * (k - 1) / drift.period) *
                             direction);
        break;
    }
  }
  return b;
}

}  // namespace

TimeVaryingProblem gen_quadratic_box(const QuadraticBoxParams& params) {
  if (params.dimension < 1 || params.horizon < 1) {
    throw std::invalid_argument("gen_quadratic_box: dimension and horizon must be >= 1");
  }
  if (params.q_min < 0 || params.q_min > params.q_max || !(params.q_max > 0)) {
    throw std::invalid_argument("gen_quadratic_box: need 0 <= q_min <= q_max, q_max > 0");
  }
  if (!(params.box_lo < params.box_hi)) {
    throw std::invalid_argument("gen_quadratic_box: empty box");
  }
  Rng rng(Rng::mix(params.seed, 0x9b0c5));
  const int n = params.dimension;

  auto q = std::make_shared<Vec>(n);
  (*q)[0] = params.q_max;
  if (n > 1) (*q)[n - 1] = params.q_min;
  for (int i = 1; i + 1 < n; ++i) (*q)[i] = rng.uniform(params.q_min, params.q_max);

  Vec b1(n);
  const double mid = 0.5 * (params.box_lo + params.box_hi);
  const double half = 0.25 * (params.box_hi - params.box_lo);
  for (int i = 0; i < n; ++i) b1[i] = mid + rng.uniform(-half, half);
  auto b = std::make_shared<std::vector<Vec>>(
      drift_sequence(std::move(b1), params.drift, params.horizon, rng));

  const FeasibleSet box = FeasibleSet::box(Vec::Constant(n, params.box_lo),
                                           Vec::Constant(n, params.box_hi));

  TimeVaryingProblem p;
  p.dimension = n;
  p.horizon = params.horizon;
  p.smooth.reserve(static_cast<size_t>(params.horizon));
  p.nonsmooth.reserve(static_cast<size_t>(params.horizon));
  for (int k = 1; k <= params.horizon; ++k) {
    const Vec& bk = (*b)[static_cast<size_t>(k - 1)];
    SmoothCost g;
    g.lipschitz = params.q_max;
    g.strong_convexity = params.q_min;
    g.value = [q, bk](const Vec& x) {
      return 0.5 * (q->array() * (x - bk).array().square()).sum();
    };
    g.gradient = [q, bk](const Vec& x) { return Vec(q->array() * (x - bk).array()); };
    p.smooth.push_back(std::move(g));
    p.nonsmooth.push_back(NonsmoothCost::indicator(box));
  }
  if (params.q_min > 0) {
    const double lo = params.box_lo, hi = params.box_hi;
    p.analytic_optimum = [b, lo, hi](int k) {
      return Vec(b->at(static_cast<size_t>(k - 1)).cwiseMax(lo).cwiseMin(hi));
    };
  }
  return p;
}

TimeVaryingProblem gen_lasso_stream(const LassoStreamParams& params) {
  if (params.dimension < 1 || params.horizon < 1) {
    throw std::invalid_argument("gen_lasso_stream: dimension and horizon must be >= 1");
  }
  if (params.weight < 0) throw std::invalid_argument("gen_lasso_stream: negative weight");
  Rng rng(Rng::mix(params.seed, 0x1a550));
  const int n = params.dimension;

  Vec b1(n);
  for (int i = 0; i < n; ++i) b1[i] = rng.uniform(-1.5, 1.5);
  auto b = std::make_shared<std::vector<Vec>>(
      drift_sequence(std::move(b1), params.drift, params.horizon, rng));

  TimeVaryingProblem p;
  p.dimension = n;
  p.horizon = params.horizon;
  for (int k = 1; k <= params.horizon; ++k) {
    const Vec& bk = (*b)[static_cast<size_t>(k - 1)];
    SmoothCost g;
    g.lipschitz = 1.0;
    g.strong_convexity = 1.0;
    g.value = [bk](const Vec& x) { return 0.5 * (x - bk).squaredNorm(); };
    g.gradient = [bk](const Vec& x) { return Vec(x - bk); };
    p.smooth.push_back(std::move(g));
    p.nonsmooth.push_back(NonsmoothCost::l1(params.weight));
  }
  const double w = params.weight;
  p.analytic_optimum = [b, w](int k) {
    const Vec& bk = b->at(static_cast<size_t>(k - 1));
    Vec x(bk.size());
    for (int i = 0; i < bk.size(); ++i) {
      x[i] = bk[i] > w ? bk[i] - w : (bk[i] < -w ? bk[i] + w : 0.0);
    }
    return x;
  };
  return p;
}

Mat NetworkTopology::routing_matrix() const {
  Mat t = Mat::Zero(node_count, static_cast<int>(edges.size()));
  for (size_t e = 0; e < edges.size(); ++e) {
    t(edges[e].first, static_cast<int>(e)) += 1.0;
    t(edges[e].second, static_cast<int>(e)) -= 1.0;
  }
  return t;
}

void NetworkTopology::validate() const {
  if (node_count < 2) throw std::invalid_argument("topology: need at least two nodes");
  if (edges.empty()) throw std::invalid_argument("topology: need at least one edge");
  for (const auto& [tail, head] : edges) {
    if (tail < 0 || tail >= node_count || head < 0 || head >= node_count || tail == head) {
      throw std::invalid_argument("topology: bad edge endpoints");
    }
  }
  if (flows.empty()) throw std::invalid_argument("topology: need at least one flow");
  for (const auto& f : flows) {
    if (f.source < 0 || f.source >= node_count || f.destination < 0 ||
        f.destination >= node_count || f.source == f.destination) {
      throw std::invalid_argument("topology: bad flow endpoints");
    }
  }
}

NetworkTopology NetworkTopology::default_six_node() {
  NetworkTopology t;
  t.node_count = 6;
  t.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {1, 5}, {4, 2}};
  t.flows = {{0, 2}, {3, 5}};
  return t;
}

namespace {

/// BFS edge path tail -> ... -> destination; empty when unreachable.
std::vector<int> bfs_edge_path(const NetworkTopology& topo, int from, int to) {
  std::vector<int> prev_edge(static_cast<size_t>(topo.node_count), -1);
  std::vector<bool> seen(static_cast<size_t>(topo.node_count), false);
  std::deque<int> queue{from};
  seen[static_cast<size_t>(from)] = true;
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    if (node == to) break;
    for (size_t e = 0; e < topo.edges.size(); ++e) {
      if (topo.edges[e].first != node) continue;
      const int next = topo.edges[e].second;
      if (seen[static_cast<size_t>(next)]) continue;
      seen[static_cast<size_t>(next)] = true;
      prev_edge[static_cast<size_t>(next)] = static_cast<int>(e);
      queue.push_back(next);
    }
  }
  if (!seen[static_cast<size_t>(to)]) return {};
  std::vector<int> path;
  for (int node = to; node != from;) {
    const int e = prev_edge[static_cast<size_t>(node)];
    path.push_back(e);
    node = topo.edges[static_cast<size_t>(e)].first;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct NetworkData {
  NetworkTopology topo;
  int edge_count = 0;
  int flow_count = 0;
  std::vector<Vec> source_rows;  // routing row of each flow's source (edge space)
  double nu = 0.0;
};

}  // namespace

TimeVaryingProblem gen_network_flow(const NetworkTopology& topology, int horizon,
                                    const NetworkFlowParams& params,
                                    std::uint64_t seed) {
  topology.validate();
  if (horizon < 1) throw std::invalid_argument("gen_network_flow: horizon must be >= 1");
  if (!(params.nu > 0)) throw std::invalid_argument("gen_network_flow: nu must be positive");
  if (params.margin < 0) throw std::invalid_argument("gen_network_flow: negative margin");

  const int edge_count = static_cast<int>(topology.edges.size());
  const int flow_count = static_cast<int>(topology.flows.size());
  const int n = edge_count * flow_count;
  const Mat routing = topology.routing_matrix();

  auto data = std::make_shared<NetworkData>();
  data->topo = topology;
  data->edge_count = edge_count;
  data->flow_count = flow_count;
  data->nu = params.nu;
  for (const auto& f : topology.flows) {
    data->source_rows.push_back(routing.row(f.source).transpose());
  }

  // Anchor: every non-destination node injects a small amount routed to the
  // destination, plus a uniform floor on every coordinate so all sign
  // constraints are strict.
  const double delta = 0.02;
  const double floor = delta / 10.0;
  Vec anchor = Vec::Constant(n, floor);
  for (int s = 0; s < flow_count; ++s) {
    const int dst = topology.flows[static_cast<size_t>(s)].destination;
    for (int node = 0; node < topology.node_count; ++node) {
      if (node == dst) continue;
      const auto path = bfs_edge_path(topology, node, dst);
      if (path.empty()) {
        std::ostringstream os;
        os << "gen_network_flow: node " << node << " cannot reach destination " << dst
           << "; the anchor construction needs a path from every node to every destination";
        throw ConfigError(os.str());
      }
      for (int e : path) anchor[s * edge_count + e] += delta;
    }
  }

  Rng rng(Rng::mix(seed, 0x4e7));

  TimeVaryingProblem p;
  p.dimension = n;
  p.horizon = horizon;
  p.smooth.reserve(static_cast<size_t>(horizon));
  p.nonsmooth.reserve(static_cast<size_t>(horizon));

  Vec kappa = Vec::Constant(flow_count, params.kappa_init);
  Vec exogenous = Vec::Constant(edge_count, 2.0 * params.exogenous_min);
  Vec capacity_max = Vec::Zero(edge_count);
  std::vector<Vec> capacities(static_cast<size_t>(horizon));
  std::vector<Vec> exogenous_seq(static_cast<size_t>(horizon));
  std::vector<Vec> kappa_seq(static_cast<size_t>(horizon));
  int clamp_events = 0;

  const double gain_std = std::sqrt(params.gain_variance);
  const double power_std = std::sqrt(params.power_variance);
  const double exo_std = std::sqrt(params.exogenous_variance);

  for (int k = 0; k < horizon; ++k) {
    Vec c(edge_count);
    for (int e = 0; e < edge_count; ++e) {
      const double re = 1.0 + gain_std * rng.gaussian();
      const double im = 1.0 + gain_std * rng.gaussian();
      const double power = std::max(0.1, 1.0 + power_std * rng.gaussian());
      c[e] = std::log(1.0 + (re * re + im * im) * power);
      if (c[e] < 0.3) {
        c[e] = 0.3;
        ++clamp_events;
      }
    }
    for (int e = 0; e < edge_count; ++e) {
      double w = exogenous[e] + exo_std * rng.gaussian();
      const double w_hi = params.exogenous_max_fraction * c[e];
      if (w < params.exogenous_min || w > w_hi || c[e] - w <= 0) {
        w = std::clamp(w, params.exogenous_min, w_hi);
        ++clamp_events;
      }
      exogenous[e] = w;
    }
    for (int s = 0; s < flow_count; ++s) {
      kappa[s] = std::clamp(kappa[s] + params.kappa_walk_std * rng.gaussian(),
                            params.kappa_min, params.kappa_max);
    }
    capacities[static_cast<size_t>(k)] = c;
    exogenous_seq[static_cast<size_t>(k)] = exogenous;
    kappa_seq[static_cast<size_t>(k)] = kappa;
    capacity_max = capacity_max.cwiseMax(c);
  }
  if (clamp_events > 0) {
    p.notes.push_back("network generator clamped " + std::to_string(clamp_events) +
                      " capacity/exogenous realizations to keep links feasible");
  }

  const double diameter = std::sqrt(static_cast<double>(flow_count)) * capacity_max.norm();

  for (int k = 0; k < horizon; ++k) {
    const Vec& c = capacities[static_cast<size_t>(k)];
    const Vec& w = exogenous_seq[static_cast<size_t>(k)];
    const Vec kap = kappa_seq[static_cast<size_t>(k)];

    std::vector<LinearConstraint> rows;
    rows.reserve(static_cast<size_t>(2 * edge_count + n +
                                     flow_count * topology.node_count));
    for (int e = 0; e < edge_count; ++e) {
      Vec a = Vec::Zero(n);
      for (int s = 0; s < flow_count; ++s) a[s * edge_count + e] = 1.0;
      rows.push_back({a, c[e] - w[e], true});       // sum_s x(e,s) <= c - w
      rows.push_back({Vec(-a), w[e], true});        // sum_s x(e,s) >= -w
    }
    for (int s = 0; s < flow_count; ++s) {
      const auto& flow = topology.flows[static_cast<size_t>(s)];
      for (int node = 0; node < topology.node_count; ++node) {
        if (node == flow.destination) continue;
        Vec a = Vec::Zero(n);
        a.segment(s * edge_count, edge_count) = -routing.row(node).transpose();
        rows.push_back({std::move(a), 0.0, false});  // injections stay nonnegative
      }
      Vec a = Vec::Zero(n);
      a.segment(s * edge_count, edge_count) = routing.row(flow.source).transpose();
      rows.push_back({std::move(a), params.z_max, false});
    }
    for (int i = 0; i < n; ++i) {
      Vec a = Vec::Zero(n);
      a[i] = -1.0;
      rows.push_back({std::move(a), 0.0, false});    // x >= 0
    }

    FeasibleSet set = FeasibleSet::polytope(std::move(rows), anchor, diameter);
    if (params.margin > 0) {
      set.shrink(params.margin);  // throws when the restriction empties it
    }
    p.nonsmooth.push_back(NonsmoothCost::indicator(std::move(set)));

    SmoothCost g;
    g.strong_convexity = params.nu;
    double lip = params.nu;
    for (int s = 0; s < flow_count; ++s) {
      lip = std::max(lip, params.nu + kap[s] * data->source_rows[static_cast<size_t>(s)]
                                                   .squaredNorm());
    }
    g.lipschitz = lip;
    g.value = [data, kap](const Vec& x) {
      double v = 0.5 * data->nu * x.squaredNorm();
      for (int s = 0; s < data->flow_count; ++s) {
        const double injection =
            data->source_rows[static_cast<size_t>(s)].dot(
                x.segment(s * data->edge_count, data->edge_count));
        if (injection <= -1.0) {
          throw std::domain_error("network utility: log argument nonpositive for flow " +
                                  std::to_string(s));
        }
        v -= kap[s] * std::log1p(injection);
      }
      return v;
    };
    g.gradient = [data, kap](const Vec& x) {
      Vec grad = data->nu * x;
      for (int s = 0; s < data->flow_count; ++s) {
        const Vec& row = data->source_rows[static_cast<size_t>(s)];
        const double injection =
            row.dot(x.segment(s * data->edge_count, data->edge_count));
        if (injection <= -1.0) {
          throw std::domain_error("network utility: log argument nonpositive for flow " +
                                  std::to_string(s));
        }
        grad.segment(s * data->edge_count, data->edge_count) -=
            (kap[s] / (1.0 + injection)) * row;
      }
      return grad;
    };
    p.smooth.push_back(std::move(g));
  }
  return p;
}

}  // namespace oipg
