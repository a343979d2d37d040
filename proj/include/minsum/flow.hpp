#ifndef MINSUM_FLOW_HPP
#define MINSUM_FLOW_HPP

#include <cstdint>
#include <vector>

#include "minsum/common.hpp"

namespace minsum {

struct FlowArc {
  std::int32_t from = 0;
  std::int32_t to = 0;
  std::int64_t capacity = 0;
  std::int64_t lower = 0;
  double cost = 0.0;
};

// Min-cost flow instance: send `required_flow` units from source to sink while
// respecting per-arc [lower, capacity] bounds.  Costs are finite and >= 0.
struct FlowNetwork {
  std::int32_t node_count = 0;
  std::vector<FlowArc> arcs;
  std::int32_t source = 0;
  std::int32_t sink = 0;
  std::int64_t required_flow = 0;
};

// Throws on malformed networks (bounds inverted, self loop, bad node ids,
// negative or non-finite cost).
void validate_network(const FlowNetwork& net);

struct FlowSolution {
  bool feasible = false;
  std::vector<std::int64_t> arc_flow;   // aligned with net.arcs
  double total_cost = 0.0;
  std::vector<double> potentials;       // node potentials at termination
};

struct EliminatedNetwork {
  FlowNetwork net;       // lower bounds all zero, fresh super source/sink
  double offset_cost = 0.0;
  std::size_t original_arcs = 0;  // arcs[0..original_arcs) map 1:1, shifted by lower
};

// Standard demand transform: forces every lower bound, routes the induced
// node excesses through a super source/sink, and accounts the forced cost in
// offset_cost.  Solving the result and adding back lower bounds and offset
// reproduces the original optimum.
EliminatedNetwork eliminate_lower_bounds(const FlowNetwork& net);

// Successive shortest augmenting paths with node potentials.  Integral flows
// by construction.  Never invents an assignment: when required_flow cannot be
// met, feasible is false and arc_flow holds whatever was routed.
// Deterministic: ties in path selection resolve toward lower node and arc
// indices.
FlowSolution solve_min_cost_flow(const FlowNetwork& net);

}  // namespace minsum

#endif  // MINSUM_FLOW_HPP
