#include "minsum/oracle_sim.hpp"

#include <algorithm>

#include "minsum/flow.hpp"
#include "minsum/rng.hpp"

namespace minsum {

CorruptionPlan corrupt_labels(const Labeling& truth, double alpha,
                              std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 0.5))
    throw InvalidAlphaError("corrupt_labels needs alpha in [0, 0.5)");
  std::size_t n = truth.labels.size();
  validate_labeling(truth, n);
  std::size_t k = static_cast<std::size_t>(truth.k);

  std::vector<std::vector<std::uint32_t>> members(k);
  for (std::size_t i = 0; i < n; ++i)
    members[static_cast<std::size_t>(truth.labels[i])].push_back(
        static_cast<std::uint32_t>(i));
  for (std::size_t c = 0; c < k; ++c)
    if (members[c].empty())
      throw EmptyClusterError("corrupt_labels: reference cluster is empty");

  CorruptionPlan plan;
  plan.labels = truth;
  plan.alpha_target = alpha;

  // per-cluster budget: at most floor(alpha * size) members may leave
  std::vector<std::int64_t> budget(k);
  for (std::size_t c = 0; c < k; ++c)
    budget[c] = guarded_floor(alpha * static_cast<double>(members[c].size()));

  auto eng = rng::make_engine(seed, {0x636f7272});
  // pool of members still carrying their original label, per cluster
  std::vector<std::vector<std::uint32_t>> pool = members;
  std::vector<std::int64_t> swapped(k, 0);

  // repeatedly swap one point between the two clusters with the most
  // remaining budget; stops when fewer than two clusters can still move
  while (true) {
    std::size_t a = k, b = k;
    for (std::size_t c = 0; c < k; ++c) {
      if (budget[c] <= 0 || pool[c].empty()) continue;
      if (a == k || budget[c] > budget[a]) {
        b = a;
        a = c;
      } else if (b == k || budget[c] > budget[b]) {
        b = c;
      }
    }
    if (a == k || b == k) break;
    if (a > b) std::swap(a, b);

    std::size_t ia = rng::uniform_index(eng, pool[a].size());
    std::size_t ib = rng::uniform_index(eng, pool[b].size());
    std::uint32_t pa = pool[a][ia];
    std::uint32_t pb = pool[b][ib];
    pool[a].erase(pool[a].begin() + static_cast<std::ptrdiff_t>(ia));
    pool[b].erase(pool[b].begin() + static_cast<std::ptrdiff_t>(ib));

    plan.labels.labels[pa] = static_cast<std::int32_t>(b);
    plan.labels.labels[pb] = static_cast<std::int32_t>(a);
    plan.moves.push_back(LabelMove{pa, static_cast<std::int32_t>(a),
                                   static_cast<std::int32_t>(b)});
    plan.moves.push_back(LabelMove{pb, static_cast<std::int32_t>(b),
                                   static_cast<std::int32_t>(a)});
    budget[a]--;
    budget[b]--;
    swapped[a]++;
    swapped[b]++;
  }

  double achieved = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    achieved = std::max(achieved, static_cast<double>(swapped[c]) /
                                      static_cast<double>(members[c].size()));
  plan.alpha_achieved = achieved;
  return plan;
}

namespace {

// overlap-maximizing bijection between predicted and reference clusters,
// solved as a k x k assignment on complemented overlap counts
std::vector<std::size_t> match_clusters(
    const std::vector<std::vector<std::int64_t>>& overlap, std::size_t k) {
  std::int64_t max_ov = 0;
  for (const auto& row : overlap)
    for (std::int64_t v : row) max_ov = std::max(max_ov, v);

  FlowNetwork net;
  net.node_count = static_cast<std::int32_t>(2 * k + 2);
  net.source = static_cast<std::int32_t>(2 * k);
  net.sink = static_cast<std::int32_t>(2 * k + 1);
  net.required_flow = static_cast<std::int64_t>(k);
  for (std::size_t i = 0; i < k; ++i)
    net.arcs.push_back(FlowArc{net.source, static_cast<std::int32_t>(i), 1, 0, 0.0});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      net.arcs.push_back(FlowArc{static_cast<std::int32_t>(i),
                                 static_cast<std::int32_t>(k + j), 1, 0,
                                 static_cast<double>(max_ov - overlap[i][j])});
  for (std::size_t j = 0; j < k; ++j)
    net.arcs.push_back(
        FlowArc{static_cast<std::int32_t>(k + j), net.sink, 1, 0, 0.0});

  FlowSolution sol = solve_min_cost_flow(net);
  if (!sol.feasible) throw MinsumError("cluster matching flow infeasible");

  std::vector<std::size_t> to_truth(k, 0);
  std::size_t base = k;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sol.arc_flow[base + i * k + j] == 1) to_truth[i] = j;
  return to_truth;
}

}  // namespace

double verify_error_rate(const Labeling& predicted, const Labeling& truth) {
  std::size_t n = truth.labels.size();
  if (predicted.labels.size() != n)
    throw MismatchError("verify_error_rate: labelings cover different point counts");
  validate_labeling(predicted, n);
  validate_labeling(truth, n);
  if (predicted.k != truth.k)
    throw MismatchError("verify_error_rate: labelings disagree on k");
  std::size_t k = static_cast<std::size_t>(truth.k);
  if (k > 50)
    throw TooLargeError("verify_error_rate: exact matching supported up to k = 50");

  std::vector<std::vector<std::int64_t>> overlap(k, std::vector<std::int64_t>(k, 0));
  std::vector<std::int64_t> pred_size(k, 0), truth_size(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = static_cast<std::size_t>(predicted.labels[i]);
    std::size_t t = static_cast<std::size_t>(truth.labels[i]);
    overlap[p][t]++;
    pred_size[p]++;
    truth_size[t]++;
  }

  std::vector<std::size_t> to_truth = match_clusters(overlap, k);

  double worst = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t t = to_truth[p];
    std::int64_t denom = std::max(pred_size[p], truth_size[t]);
    if (denom == 0) continue;  // both sides empty under the matching
    double err = 1.0 - static_cast<double>(overlap[p][t]) / static_cast<double>(denom);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace minsum
