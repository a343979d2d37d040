#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "minsum/flow.hpp"
#include "minsum/rng.hpp"
#include "support/enumerate_flow.hpp"

using namespace minsum;
using minsum::testing::enumerate_min_cost_flow;

namespace {

FlowNetwork random_network(rng::Engine& eng, bool with_lower) {
  FlowNetwork net;
  net.node_count = 3 + static_cast<std::int32_t>(rng::uniform_index(eng, 4));  // 3..6
  net.source = 0;
  net.sink = net.node_count - 1;
  std::size_t arcs = 3 + rng::uniform_index(eng, 6);  // 3..8
  for (std::size_t a = 0; a < arcs; ++a) {
    FlowArc arc;
    arc.from = static_cast<std::int32_t>(rng::uniform_index(eng, net.node_count));
    do {
      arc.to = static_cast<std::int32_t>(rng::uniform_index(eng, net.node_count));
    } while (arc.to == arc.from);
    arc.capacity = 1 + static_cast<std::int64_t>(rng::uniform_index(eng, 3));
    if (with_lower && rng::uniform01(eng) < 0.3)
      arc.lower = rng::uniform_index(eng, arc.capacity + 1);
    arc.cost = static_cast<double>(rng::uniform_index(eng, 9)) / 2.0;
    net.arcs.push_back(arc);
  }
  net.required_flow = static_cast<std::int64_t>(rng::uniform_index(eng, 4));
  return net;
}

void check_against_oracle(const FlowNetwork& net) {
  FlowSolution sol = solve_min_cost_flow(net);
  auto oracle = enumerate_min_cost_flow(net);
  REQUIRE(sol.arc_flow.size() == net.arcs.size());
  CHECK(sol.feasible == oracle.feasible);
  if (!sol.feasible) return;
  CHECK(rel_close(sol.total_cost, oracle.cost, 1e-9));

  // bounds and conservation on the returned flow
  std::vector<std::int64_t> balance(net.node_count, 0);
  double recomputed = 0.0;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    CHECK(sol.arc_flow[a] >= net.arcs[a].lower);
    CHECK(sol.arc_flow[a] <= net.arcs[a].capacity);
    balance[net.arcs[a].from] -= sol.arc_flow[a];
    balance[net.arcs[a].to] += sol.arc_flow[a];
    recomputed += static_cast<double>(sol.arc_flow[a]) * net.arcs[a].cost;
  }
  CHECK(rel_close(recomputed, sol.total_cost, 1e-9));
  for (std::int32_t v = 0; v < net.node_count; ++v) {
    if (v == net.source || v == net.sink) continue;
    CHECK(balance[v] == 0);
  }
  CHECK(balance[net.source] == -net.required_flow);
  CHECK(balance[net.sink] == net.required_flow);
}

}  // namespace

TEST_CASE("single arc") {
  FlowNetwork net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.required_flow = 2;
  net.arcs.push_back(FlowArc{0, 1, 3, 0, 1.5});
  FlowSolution sol = solve_min_cost_flow(net);
  REQUIRE(sol.feasible);
  CHECK(sol.arc_flow[0] == 2);
  CHECK(sol.total_cost == doctest::Approx(3.0));
}

TEST_CASE("forced arc via lower bound accounts its cost") {
  // 0 -> 1 -> 2 with the middle arc pinned at 3 units of cost 2 each
  FlowNetwork net;
  net.node_count = 3;
  net.source = 0;
  net.sink = 2;
  net.required_flow = 3;
  net.arcs.push_back(FlowArc{0, 1, 3, 0, 0.0});
  net.arcs.push_back(FlowArc{1, 2, 3, 3, 2.0});
  FlowSolution sol = solve_min_cost_flow(net);
  REQUIRE(sol.feasible);
  CHECK(sol.arc_flow[1] == 3);
  CHECK(sol.total_cost == doctest::Approx(6.0));
}

TEST_CASE("cheap-expensive parallel arcs fill cheapest first") {
  FlowNetwork net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.required_flow = 3;
  net.arcs.push_back(FlowArc{0, 1, 2, 0, 5.0});
  net.arcs.push_back(FlowArc{0, 1, 2, 0, 1.0});
  FlowSolution sol = solve_min_cost_flow(net);
  REQUIRE(sol.feasible);
  CHECK(sol.arc_flow[0] == 1);
  CHECK(sol.arc_flow[1] == 2);
  CHECK(sol.total_cost == doctest::Approx(7.0));
}

TEST_CASE("infeasible demands are reported, not repaired") {
  FlowNetwork net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.required_flow = 5;
  net.arcs.push_back(FlowArc{0, 1, 3, 0, 1.0});
  FlowSolution sol = solve_min_cost_flow(net);
  CHECK_FALSE(sol.feasible);

  // disconnected sink
  FlowNetwork net2;
  net2.node_count = 3;
  net2.source = 0;
  net2.sink = 2;
  net2.required_flow = 1;
  net2.arcs.push_back(FlowArc{0, 1, 1, 0, 1.0});
  CHECK_FALSE(solve_min_cost_flow(net2).feasible);
}

TEST_CASE("lower-bound elimination bookkeeping") {
  FlowNetwork net;
  net.node_count = 3;
  net.source = 0;
  net.sink = 2;
  net.required_flow = 3;
  net.arcs.push_back(FlowArc{0, 1, 3, 0, 0.0});
  net.arcs.push_back(FlowArc{1, 2, 3, 3, 2.0});
  EliminatedNetwork elim = eliminate_lower_bounds(net);
  CHECK(elim.offset_cost == doctest::Approx(6.0));
  CHECK(elim.original_arcs == 2);
  for (std::size_t a = 0; a < elim.original_arcs; ++a)
    CHECK(elim.net.arcs[a].lower == 0);
  // transformed network must itself be solvable and consistent
  FlowSolution sol = solve_min_cost_flow(elim.net);
  CHECK(sol.feasible);
}

TEST_CASE("validation rejects malformed networks") {
  FlowNetwork net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.required_flow = 0;
  net.arcs.push_back(FlowArc{0, 1, 1, 2, 1.0});  // lower > capacity
  CHECK_THROWS_AS(validate_network(net), MinsumError);
  net.arcs[0] = FlowArc{0, 0, 1, 0, 1.0};  // self loop
  CHECK_THROWS_AS(validate_network(net), MinsumError);
  net.arcs[0] = FlowArc{0, 5, 1, 0, 1.0};  // bad node id
  CHECK_THROWS_AS(validate_network(net), MinsumError);
  net.arcs[0] = FlowArc{0, 1, 1, 0, -1.0};  // negative cost
  CHECK_THROWS_AS(validate_network(net), MinsumError);
}

TEST_CASE("random networks match exhaustive enumeration") {
  auto eng = rng::make_engine(41);
  int feasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    FlowNetwork net = random_network(eng, false);
    check_against_oracle(net);
    if (enumerate_min_cost_flow(net).feasible) feasible_seen++;
  }
  CHECK(feasible_seen > 30);  // the matrix must actually exercise solving
}

TEST_CASE("random networks with lower bounds match exhaustive enumeration") {
  auto eng = rng::make_engine(42);
  int feasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    FlowNetwork net = random_network(eng, true);
    check_against_oracle(net);
    if (enumerate_min_cost_flow(net).feasible) feasible_seen++;
  }
  CHECK(feasible_seen > 20);
}

TEST_CASE("optimality certificate: no negative cycle in the residual graph") {
  auto eng = rng::make_engine(43);
  for (int trial = 0; trial < 60; ++trial) {
    FlowNetwork net = random_network(eng, false);
    FlowSolution sol = solve_min_cost_flow(net);
    if (!sol.feasible) continue;

    struct RArc {
      std::int32_t from, to;
      double cost;
    };
    std::vector<RArc> res;
    for (std::size_t a = 0; a < net.arcs.size(); ++a) {
      const FlowArc& arc = net.arcs[a];
      if (sol.arc_flow[a] < arc.capacity)
        res.push_back(RArc{arc.from, arc.to, arc.cost});
      if (sol.arc_flow[a] > arc.lower)
        res.push_back(RArc{arc.to, arc.from, -arc.cost});
    }
    // Bellman-Ford from everywhere at once; a relaxation on pass n means a
    // negative cycle, i.e. the flow was not optimal
    std::vector<double> dist(net.node_count, 0.0);
    bool relaxed_last = false;
    for (std::int32_t pass = 0; pass <= net.node_count; ++pass) {
      bool relaxed = false;
      for (const RArc& ra : res) {
        if (dist[ra.from] + ra.cost < dist[ra.to] - 1e-9) {
          dist[ra.to] = dist[ra.from] + ra.cost;
          relaxed = true;
        }
      }
      relaxed_last = relaxed;
      if (!relaxed) break;
    }
    CHECK_FALSE(relaxed_last);
  }
}
