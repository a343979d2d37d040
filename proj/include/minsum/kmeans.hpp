#ifndef MINSUM_KMEANS_HPP
#define MINSUM_KMEANS_HPP

#include <cstdint>
#include <vector>

#include "minsum/geometry.hpp"
#include "minsum/rng.hpp"

namespace minsum {

struct KmeansResult {
  std::vector<double> centers;  // k x d row major
  Labeling labeling;            // nearest-center assignment
  double cost = 0.0;            // sum of squared distances to assigned centers
  std::size_t iterations = 0;
};

// Constant-factor k-means baseline: distance-squared (greedy) seeding followed
// by at most `max_iters` Lloyd rounds.  Deterministic for a fixed seed.  Used
// as the coarse cost estimate feeding the main solver and as a CLI baseline.
KmeansResult kmeans_baseline(const Dataset& ds, std::int32_t k,
                             std::uint64_t seed, std::size_t max_iters = 10);

}  // namespace minsum

#endif  // MINSUM_KMEANS_HPP
