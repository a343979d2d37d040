#include "minsum/learned.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "minsum/kernels.hpp"

namespace minsum {

double gamma_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5))
    throw InvalidAlphaError("gamma_alpha defined for alpha in [0, 0.5)");
  if (alpha < 1.0 / 7.0) return 7.7;
  return (5.0 * alpha - 2.0 * alpha * alpha) /
         ((1.0 - 2.0 * alpha) * (1.0 - alpha));
}

double learned_cost_bound_factor(double alpha) {
  double g = gamma_alpha(alpha);
  return (1.0 + g * alpha) / ((1.0 - alpha) * (1.0 - alpha));
}

namespace {

struct Clusters {
  std::vector<std::vector<std::uint32_t>> members;  // per predicted cluster
  std::vector<std::size_t> nonempty;                // cluster ids with points
};

Clusters collect(const Dataset& ds, const LabelPrediction& pred) {
  validate_labeling(pred.labels, ds.size());
  if (!(pred.alpha >= 0.0 && pred.alpha < 0.5))
    throw InvalidAlphaError("prediction alpha must lie in [0, 0.5)");
  Clusters cl;
  cl.members.resize(static_cast<std::size_t>(pred.labels.k));
  for (std::size_t i = 0; i < ds.size(); ++i)
    cl.members[static_cast<std::size_t>(pred.labels.labels[i])].push_back(
        static_cast<std::uint32_t>(i));
  for (std::size_t c = 0; c < cl.members.size(); ++c)
    if (!cl.members[c].empty()) cl.nonempty.push_back(c);
  return cl;
}

double window_mean(std::vector<double>& vals, std::size_t w);

// centers for every nonempty cluster; empty clusters get a zero row and are
// skipped by the flow construction
std::vector<double> centers_tolerant(const Dataset& ds, const LabelPrediction& pred,
                                     const Clusters& cl) {
  std::size_t k = cl.members.size(), d = ds.dim();
  std::vector<double> centers(k * d, 0.0);
  std::vector<double> vals;
  for (std::size_t c : cl.nonempty) {
    const auto& mem = cl.members[c];
    std::size_t w = static_cast<std::size_t>(
        guarded_ceil((1.0 - pred.alpha) * static_cast<double>(mem.size())));
    w = std::max<std::size_t>(1, std::min(w, mem.size()));
    vals.resize(mem.size());
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < mem.size(); ++i) vals[i] = ds.row(mem[i])[j];
      centers[c * d + j] = window_mean(vals, w);
    }
  }
  return centers;
}

// best window mean of one sorted coordinate slice
double window_mean(std::vector<double>& vals, std::size_t w) {
  std::sort(vals.begin(), vals.end());
  std::size_t m = vals.size();
  std::vector<double> pre(m + 1, 0.0), pre2(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    pre[i + 1] = pre[i] + vals[i];
    pre2[i + 1] = pre2[i] + vals[i] * vals[i];
  }
  double best_cost = std::numeric_limits<double>::infinity();
  double best_mean = 0.0;
  for (std::size_t t = 0; t + w <= m; ++t) {
    double s = pre[t + w] - pre[t];
    double s2 = pre2[t + w] - pre2[t];
    double cost = s2 - s * s / static_cast<double>(w);
    if (cost < best_cost) {
      best_cost = cost;
      best_mean = s / static_cast<double>(w);
    }
  }
  return best_mean;
}

}  // namespace

std::vector<double> learned_centers(const Dataset& ds, const LabelPrediction& pred) {
  Clusters cl = collect(ds, pred);
  if (cl.nonempty.size() != cl.members.size())
    throw EmptyClusterError("learned_centers: predicted cluster is empty");
  return centers_tolerant(ds, pred, cl);
}

LearnedFlowBuild build_assignment_flow(const Dataset& ds, const LabelPrediction& pred,
                                       const std::vector<double>& centers) {
  Clusters cl = collect(ds, pred);
  std::size_t n = ds.size(), d = ds.dim(), k = cl.members.size();
  if (centers.size() != k * d)
    throw MismatchError("build_assignment_flow: center block does not match k");

  double shrink = 1.0 - pred.alpha;
  std::vector<std::int64_t> lo(k, 0), hi(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    double sz = static_cast<double>(cl.members[c].size());
    lo[c] = guarded_ceil(shrink * sz);
    hi[c] = guarded_floor(sz / shrink);
  }

  LearnedFlowBuild out;
  // rounded lower bounds can overshoot n; shave the largest clusters first
  std::int64_t lo_total = std::accumulate(lo.begin(), lo.end(), std::int64_t{0});
  if (lo_total > static_cast<std::int64_t>(n)) {
    out.flags.push_back("lower_bounds_adjusted");
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cl.members[a].size() > cl.members[b].size();
    });
    std::size_t at = 0;
    while (lo_total > static_cast<std::int64_t>(n)) {
      std::size_t c = order[at % k];
      if (lo[c] > 0) {
        lo[c]--;
        lo_total--;
      }
      ++at;
    }
  }

  FlowNetwork& net = out.net;
  net.node_count = static_cast<std::int32_t>(n + k + 2);
  net.source = 0;
  net.sink = static_cast<std::int32_t>(n + k + 1);
  net.required_flow = static_cast<std::int64_t>(n);

  for (std::size_t i = 0; i < n; ++i)
    net.arcs.push_back(
        FlowArc{0, static_cast<std::int32_t>(1 + i), 1, 0, 0.0});
  std::vector<double> dist(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (cl.members[c].empty()) continue;
    double weight = static_cast<double>(cl.members[c].size()) / shrink;
    kern::sqdist_batch(ds.data(), n, d, centers.data() + c * d, dist.data());
    for (std::size_t i = 0; i < n; ++i)
      net.arcs.push_back(FlowArc{static_cast<std::int32_t>(1 + i),
                                 static_cast<std::int32_t>(1 + n + c), 1, 0,
                                 weight * dist[i]});
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (cl.members[c].empty()) continue;
    net.arcs.push_back(FlowArc{static_cast<std::int32_t>(1 + n + c), net.sink,
                               hi[c], lo[c], 0.0});
  }
  return out;
}

namespace {

LearnedResult solve_one(const Dataset& ds, const LabelPrediction& pred) {
  std::size_t n = ds.size();
  Clusters cl = collect(ds, pred);
  std::vector<double> centers = centers_tolerant(ds, pred, cl);
  LearnedFlowBuild build = build_assignment_flow(ds, pred, centers);

  LearnedResult res;
  res.alpha_used = pred.alpha;
  res.flags = build.flags;

  FlowSolution sol = solve_min_cost_flow(build.net);
  if (!sol.feasible) {
    res.flags.push_back("assignment_flow_infeasible");
    return res;  // caller decides how to recover; labeling left empty
  }

  // each point node pushes its unit over exactly one point->cluster arc
  std::vector<std::int32_t> labels(n, -1);
  for (std::size_t a = 0; a < build.net.arcs.size(); ++a) {
    const FlowArc& arc = build.net.arcs[a];
    if (arc.from >= 1 && arc.from <= static_cast<std::int32_t>(n) &&
        sol.arc_flow[a] == 1 &&
        arc.to > static_cast<std::int32_t>(n) && arc.to < build.net.sink) {
      labels[static_cast<std::size_t>(arc.from - 1)] =
          static_cast<std::int32_t>(arc.to) - static_cast<std::int32_t>(n) - 1;
    }
  }
  for (std::int32_t v : labels)
    if (v < 0) throw MinsumError("assignment flow left a point unrouted");

  res.labeling = Labeling{std::move(labels), pred.labels.k};
  res.flow_cost = sol.total_cost;
  res.report = make_cost_report(ds, res.labeling);
  return res;
}

}  // namespace

LearnedResult solve_learned(const Dataset& ds, const LabelPrediction& pred) {
  // drop empty predicted clusters up front; their ids keep their meaning and
  // simply receive no points
  LearnedResult res = solve_one(ds, pred);
  if (!res.labeling.labels.empty()) return res;

  // escalate the noise guess toward 0.49 before giving up on the flow
  double a = pred.alpha;
  for (int attempt = 0; attempt < 3; ++attempt) {
    a = (a + 0.49) / 2.0;
    LabelPrediction retry{pred.labels, a};
    LearnedResult r = solve_one(ds, retry);
    if (!r.labeling.labels.empty()) {
      r.flags.push_back("alpha_escalated");
      return r;
    }
  }
  LearnedResult naive;
  naive.labeling = pred.labels;
  naive.alpha_used = pred.alpha;
  naive.report = make_cost_report(ds, naive.labeling);
  naive.flow_cost = std::numeric_limits<double>::quiet_NaN();
  naive.flags.push_back("assignment_flow_infeasible");
  naive.flags.push_back("fallback_naive_labeling");
  return naive;
}

LearnedResult alpha_sweep(const Dataset& ds, const Labeling& predicted_labels) {
  std::size_t n = ds.size();
  double floor_alpha = 1.0 / static_cast<double>(n);

  bool have = false;
  LearnedResult best;
  for (double a = 0.49; a >= floor_alpha; a /= 2.0) {
    LearnedResult r = solve_learned(ds, LabelPrediction{predicted_labels, a});
    if (r.labeling.labels.empty()) continue;
    if (!have || r.report.minsum_cost < best.report.minsum_cost) {
      best = std::move(r);
      have = true;
    }
  }
  if (!have) {
    best.labeling = predicted_labels;
    best.report = make_cost_report(ds, best.labeling);
    best.flags.push_back("alpha_sweep_empty_grid");
  }
  return best;
}

}  // namespace minsum
