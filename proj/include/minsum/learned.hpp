#ifndef MINSUM_LEARNED_HPP
#define MINSUM_LEARNED_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "minsum/flow.hpp"
#include "minsum/geometry.hpp"

namespace minsum {

// Noisy cluster labels plus the error-rate bound they are assumed to satisfy:
// each predicted cluster agrees with its reference cluster on at least a
// (1 - alpha) fraction of the larger of the two.
struct LabelPrediction {
  Labeling labels;
  double alpha = 0.0;
};

// Approximation factor of the full pipeline as a function of alpha:
// (1 + gamma_alpha(a) * a) / (1 - a)^2.
double gamma_alpha(double alpha);
double learned_cost_bound_factor(double alpha);

// Robust per-coordinate center estimate: for each cluster and coordinate,
// scan contiguous windows of ceil((1 - alpha) |P_i|) sorted values and keep
// the mean of the window with the smallest within-window squared deviation.
// Returns k x d row major centers.  Throws EmptyClusterError on an empty
// predicted cluster.
std::vector<double> learned_centers(const Dataset& ds, const LabelPrediction& pred);

struct LearnedFlowBuild {
  FlowNetwork net;
  // node layout: source = 0, points = 1..n, clusters = n+1..n+k, sink = n+k+1
  std::vector<std::string> flags;
};

// Assignment network: unit arc per point, per-cluster size window
// [ceil((1-alpha)|P_i|), floor(|P_i|/(1-alpha))], point-to-cluster cost
// |P_i| * ||x - c_i||^2 / (1 - alpha).  When the rounded lower bounds exceed
// n, the largest clusters give up one unit each until the totals fit (flagged
// "lower_bounds_adjusted").
LearnedFlowBuild build_assignment_flow(const Dataset& ds, const LabelPrediction& pred,
                                       const std::vector<double>& centers);

struct LearnedResult {
  Labeling labeling;
  CostReport report;
  double flow_cost = 0.0;
  double alpha_used = 0.0;
  std::vector<std::string> flags;
};

// Full pipeline for one alpha guess: robust centers, min-cost assignment,
// exact cost of the extracted labeling.
LearnedResult solve_learned(const Dataset& ds, const LabelPrediction& pred);

// Runs solve_learned over a decreasing geometric grid of alpha guesses
// (0.49, 0.245, ... down to 1/n) and returns the cheapest outcome.
LearnedResult alpha_sweep(const Dataset& ds, const Labeling& predicted_labels);

}  // namespace minsum

#endif  // MINSUM_LEARNED_HPP
