#include "minsum/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace minsum {

void validate_network(const FlowNetwork& net) {
  if (net.node_count < 2) throw MinsumError("flow network needs at least 2 nodes");
  auto node_ok = [&](std::int32_t v) { return v >= 0 && v < net.node_count; };
  if (!node_ok(net.source) || !node_ok(net.sink) || net.source == net.sink)
    throw MinsumError("flow network has bad source/sink");
  if (net.required_flow < 0) throw MinsumError("required_flow must be >= 0");
  for (const FlowArc& a : net.arcs) {
    if (!node_ok(a.from) || !node_ok(a.to)) throw MinsumError("arc endpoint out of range");
    if (a.from == a.to) throw MinsumError("self loops are not allowed");
    if (a.lower < 0 || a.capacity < a.lower)
      throw MinsumError("arc bounds must satisfy 0 <= lower <= capacity");
    if (!std::isfinite(a.cost) || a.cost < 0.0)
      throw MinsumError("arc cost must be finite and >= 0");
  }
}

EliminatedNetwork eliminate_lower_bounds(const FlowNetwork& net) {
  validate_network(net);
  EliminatedNetwork out;
  out.original_arcs = net.arcs.size();

  std::int32_t n = net.node_count;
  std::int32_t super_src = n, super_sink = n + 1;
  out.net.node_count = n + 2;
  out.net.source = super_src;
  out.net.sink = super_sink;

  // node balances after substituting flow = lower + residual: the source
  // supplies required_flow, the sink absorbs it, and each forced lower bound
  // moves `lower` units of balance from its tail to its head
  std::vector<std::int64_t> excess(static_cast<std::size_t>(n), 0);
  excess[static_cast<std::size_t>(net.source)] += net.required_flow;
  excess[static_cast<std::size_t>(net.sink)] -= net.required_flow;

  for (const FlowArc& a : net.arcs) {
    FlowArc t = a;
    t.capacity = a.capacity - a.lower;
    t.lower = 0;
    out.net.arcs.push_back(t);
    if (a.lower > 0) {
      excess[static_cast<std::size_t>(a.from)] -= a.lower;
      excess[static_cast<std::size_t>(a.to)] += a.lower;
      out.offset_cost += static_cast<double>(a.lower) * a.cost;
    }
  }

  std::int64_t required = 0;
  for (std::int32_t v = 0; v < n; ++v) {
    std::int64_t e = excess[static_cast<std::size_t>(v)];
    if (e > 0) {
      out.net.arcs.push_back(FlowArc{super_src, v, e, 0, 0.0});
      required += e;
    } else if (e < 0) {
      out.net.arcs.push_back(FlowArc{v, super_sink, -e, 0, 0.0});
    }
  }
  out.net.required_flow = required;
  return out;
}

namespace {

// residual edge
struct REdge {
  std::int32_t to;
  std::int64_t cap;
  double cost;
  std::size_t rev;        // index of the reverse edge in graph[to]
  std::int32_t arc_index; // original arc, -1 for reverse edges
};

struct Core {
  std::vector<std::vector<REdge>> graph;

  explicit Core(std::int32_t n) : graph(static_cast<std::size_t>(n)) {}

  void add(std::int32_t u, std::int32_t v, std::int64_t cap, double cost,
           std::int32_t arc_index) {
    graph[u].push_back(REdge{v, cap, cost, graph[v].size(), arc_index});
    graph[v].push_back(REdge{u, 0, -cost, graph[u].size() - 1, -1});
  }
};

}  // namespace

FlowSolution solve_min_cost_flow(const FlowNetwork& net) {
  validate_network(net);

  bool has_lower = false;
  for (const FlowArc& a : net.arcs)
    if (a.lower > 0) { has_lower = true; break; }

  if (has_lower) {
    EliminatedNetwork el = eliminate_lower_bounds(net);
    FlowSolution inner = solve_min_cost_flow(el.net);
    FlowSolution out;
    out.feasible = inner.feasible;
    out.arc_flow.resize(net.arcs.size());
    for (std::size_t i = 0; i < net.arcs.size(); ++i)
      out.arc_flow[i] = inner.arc_flow[i] + net.arcs[i].lower;
    out.total_cost = inner.total_cost + el.offset_cost;
    out.potentials.assign(inner.potentials.begin(),
                          inner.potentials.begin() + net.node_count);
    return out;
  }

  std::size_t n = static_cast<std::size_t>(net.node_count);
  Core core(net.node_count);
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const FlowArc& a = net.arcs[i];
    core.add(a.from, a.to, a.capacity, a.cost, static_cast<std::int32_t>(i));
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pot(n, 0.0), dist(n);
  std::vector<std::int32_t> prev_node(n);
  std::vector<std::size_t> prev_edge(n);

  std::int64_t routed = 0;
  double total_cost = 0.0;

  while (routed < net.required_flow) {
    // Dijkstra on reduced costs; ties in distance pop the lower node id first
    dist.assign(n, inf);
    dist[static_cast<std::size_t>(net.source)] = 0.0;
    using QItem = std::pair<double, std::int32_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    pq.push({0.0, net.source});
    std::vector<char> done(n, 0);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (done[static_cast<std::size_t>(u)]) continue;
      done[static_cast<std::size_t>(u)] = 1;
      for (std::size_t ei = 0; ei < core.graph[u].size(); ++ei) {
        const REdge& e = core.graph[u][ei];
        if (e.cap <= 0) continue;
        double rc = e.cost + pot[static_cast<std::size_t>(u)] - pot[static_cast<std::size_t>(e.to)];
        if (rc < 0.0) rc = 0.0;  // guard fp drift in reduced costs
        double nd = du + rc;
        if (nd < dist[static_cast<std::size_t>(e.to)]) {
          dist[static_cast<std::size_t>(e.to)] = nd;
          prev_node[static_cast<std::size_t>(e.to)] = u;
          prev_edge[static_cast<std::size_t>(e.to)] = ei;
          pq.push({nd, e.to});
        }
      }
    }
    if (dist[static_cast<std::size_t>(net.sink)] == inf) break;  // no augmenting path

    for (std::size_t v = 0; v < n; ++v)
      if (dist[v] < inf) pot[v] += dist[v];

    // bottleneck along the path, capped by the remaining requirement
    std::int64_t push = net.required_flow - routed;
    for (std::int32_t v = net.sink; v != net.source; v = prev_node[static_cast<std::size_t>(v)]) {
      const REdge& e = core.graph[prev_node[static_cast<std::size_t>(v)]][prev_edge[static_cast<std::size_t>(v)]];
      push = std::min(push, e.cap);
    }
    for (std::int32_t v = net.sink; v != net.source; v = prev_node[static_cast<std::size_t>(v)]) {
      REdge& e = core.graph[prev_node[static_cast<std::size_t>(v)]][prev_edge[static_cast<std::size_t>(v)]];
      e.cap -= push;
      core.graph[static_cast<std::size_t>(e.to)][e.rev].cap += push;
      total_cost += static_cast<double>(push) * e.cost;
    }
    routed += push;
  }

  FlowSolution sol;
  sol.feasible = routed == net.required_flow;
  sol.arc_flow.assign(net.arcs.size(), 0);
  for (std::size_t u = 0; u < n; ++u)
    for (const REdge& e : core.graph[u])
      if (e.arc_index >= 0) {
        const FlowArc& a = net.arcs[static_cast<std::size_t>(e.arc_index)];
        sol.arc_flow[static_cast<std::size_t>(e.arc_index)] = a.capacity - e.cap;
      }
  sol.total_cost = total_cost;
  sol.potentials = std::move(pot);
  return sol;
}

}  // namespace minsum
