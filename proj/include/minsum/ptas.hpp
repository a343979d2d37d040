#ifndef MINSUM_PTAS_HPP
#define MINSUM_PTAS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minsum/geometry.hpp"
#include "minsum/rng.hpp"

namespace minsum {

struct PtasCaps {
  std::size_t max_sample = 200;  // points per sample draw
  std::size_t max_subset = 6;    // subset size in candidate-mean extraction
  std::size_t max_leaves = 5000; // candidate sets kept per tree
};

// Accuracy / budget knobs for the sampling solver.  The sample sizes the
// analysis asks for are astronomically large, so the config carries both the
// analyzed values (reported) and the practical caps (used); runs that hit a
// cap say so in their flags.
struct PtasConfig {
  double epsilon = 0.3;
  double delta = 0.1;
  double beta = 0.0;        // 0 = default 2400 / epsilon^2
  double alpha_core = 0.0;  // 0 = default epsilon / 16
  PtasCaps caps;
  std::size_t exact_limit = 13;      // route tiny instances to the exact solver
  std::size_t subset_budget = 64;    // subsets tried per extraction when the
                                     // pool is too large to enumerate
  int weight_steps = 2;              // weight grid values per subset member
  std::size_t weight_combo_cap = 8;  // non-uniform weight vectors per subset
  std::size_t max_extract = 256;     // candidates per extraction call
  std::size_t profile_cap = 20000;   // size profiles tried per assignment call
  std::uint64_t seed = 1;

  void validate() const;
  double beta_eff() const { return beta > 0.0 ? beta : 2400.0 / (epsilon * epsilon); }
  double alpha_eff() const { return alpha_core > 0.0 ? alpha_core : epsilon / 16.0; }
  double gamma() const;

  double uniform_sample_theoretical(std::size_t k) const;
  std::size_t uniform_sample_size(std::size_t k) const;
  double d2_sample_theoretical(std::size_t k) const;
  std::size_t d2_sample_size(std::size_t k) const;
};

struct PreprocessResult {
  std::vector<std::vector<std::uint32_t>> components;  // point index groups
  double kmeans_estimate = 0.0;  // constant-factor k-means cost
};

// Splits the points into groups so far apart (squared center distance above
// 20 n^7 T) that no optimal cluster can span two of them.  For n <= 20 the
// separation argument is void and everything stays in one component.
PreprocessResult preprocess_partition(const Dataset& ds, std::int32_t k,
                                      const PtasConfig& cfg);

struct UniformSeedResult {
  std::vector<std::uint32_t> sample;  // i.i.d. uniform with replacement
  double theoretical_size = 0.0;
  bool capped = false;
};

UniformSeedResult uniform_seed(const Dataset& ds, std::int32_t k,
                               const PtasConfig& cfg, rng::Engine& eng);

// One subsampling level: the points whose distance-to-centers mass survives
// the threshold gamma = 2^-i * total, carrying sampling weights proportional
// to that mass.
struct PruneLevel {
  std::size_t index = 0;
  double gamma = 0.0;
  std::vector<std::uint32_t> members;   // ascending point ids
  std::vector<double> cum_weight;       // cumulative over members
  double total_weight = 0.0;
  bool degenerate = false;
};

// Levels i = 0 .. ceil(13 ln(n k / epsilon)); level sets are nested.
std::vector<PruneLevel> d2_levels(const Dataset& ds,
                                  const std::vector<double>& centers,
                                  std::size_t center_count,
                                  const PtasConfig& cfg, std::int32_t k);

std::vector<std::uint32_t> d2_sample(const PruneLevel& level, std::size_t count,
                                     rng::Engine& eng);

// Weighted averages of small subsets of sample points (and current centers):
// every subset member takes a weight from a small grid after an affine shift
// to the subset member nearest the sample centroid.  Emits up to
// cfg.max_extract candidate means, deduplicated.
std::vector<std::vector<double>> extract_candidate_means(
    const Dataset& ds, const std::vector<std::uint32_t>& sample,
    const std::vector<double>& centers, std::size_t center_count,
    const PtasConfig& cfg, rng::Engine& eng);

enum class CenterProvenance : std::uint8_t { UniformSeed, D2Extracted };

struct CandidateCenters {
  std::vector<double> centers;  // count x d row major
  std::size_t count = 0;
  std::vector<CenterProvenance> provenance;
  std::vector<std::uint64_t> branch_id;  // tree path, lexicographic order key
  double seeding_cost = 0.0;  // sum over points of min squared distance
};

// Beam-searched candidate tree: depth 1 from a uniform sample, deeper levels
// resampled proportionally to remaining distance mass, at most
// caps.max_leaves survivors per depth ranked by seeding cost.
std::vector<CandidateCenters> candidate_tree(const Dataset& ds, std::int32_t k,
                                             const PtasConfig& cfg,
                                             std::uint64_t tree_seed);

struct OptGuess {
  double value = 0.0;
  std::size_t index = 0;
};

// Geometric grid of optimum guesses covering [low, high] by powers of 1+eps.
std::vector<OptGuess> opt_guess_grid(double low, double high, double epsilon);

struct BucketAssignment {
  Labeling labeling;
  double center_cost = 0.0;  // sum_i |C_i| * sum_{x in C_i} ||x - c_i||^2
  double estimate = 0.0;     // discretized upper estimate used for selection
  std::vector<std::string> flags;
};

// Assignment stage for one candidate center set and one optimum guess:
// points are grouped by their vector of geometric distance classes toward the
// centers, cluster sizes run over a power-of-(1+eps) grid, and each size
// profile is filled optimally by a small transportation flow over the groups.
// Empty result means no profile can serve every point within (1+eps) * guess.
std::optional<BucketAssignment> assign_by_buckets(const Dataset& ds,
                                                  const CandidateCenters& cand,
                                                  const OptGuess& guess,
                                                  const PtasConfig& cfg);

struct PtasResult {
  Labeling labeling;
  CostReport report;
  std::vector<std::string> flags;
  std::size_t leaves = 0;
  std::size_t guesses = 0;
  std::size_t assignments_tried = 0;
  double kmeans_estimate = 0.0;
  double uniform_sample_theoretical = 0.0;
  double d2_sample_theoretical = 0.0;
};

// Full pipeline: far-apart component split, per-component candidate trees,
// optimum-guess grid, bucketed assignment, exact re-evaluation of every
// extracted labeling.  Instances with at most cfg.exact_limit points go to
// the exhaustive solver.
PtasResult solve_ptas(const Dataset& ds, std::int32_t k, const PtasConfig& cfg);

}  // namespace minsum

#endif  // MINSUM_PTAS_HPP
