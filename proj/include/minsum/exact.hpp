#ifndef MINSUM_EXACT_HPP
#define MINSUM_EXACT_HPP

#include <cstdint>
#include <vector>

#include "minsum/geometry.hpp"

namespace minsum {

struct ExactResult {
  Labeling labeling;
  double cost = 0.0;
  std::uint64_t partitions_examined = 0;
};

// Exhaustive optimum: enumerates every partition of the points into at most k
// nonempty parts (restricted growth strings) and returns the cheapest one.
// Among equal-cost optima the lexicographically smallest growth string wins.
// Throws TooLargeError when n exceeds `limit`.
ExactResult brute_force_minsum(const Dataset& ds, std::int32_t k,
                               std::size_t limit = 13);

struct FixedCenterResult {
  Labeling labeling;
  double cost = 0.0;
};

// Exhaustive minimum of sum_i w_i * sum_{x -> i} ||x - c_i||^2 over all
// assignments respecting per-center size bounds [lo_i, hi_i].  centers is
// k x d row major; weights w_i default to 1.  Throws InfeasibleError when the
// bounds admit no assignment, TooLargeError when n exceeds `limit`.
FixedCenterResult brute_force_fixed_centers(
    const Dataset& ds, const std::vector<double>& centers, std::int32_t k,
    const std::vector<std::int64_t>& size_lo, const std::vector<std::int64_t>& size_hi,
    const std::vector<double>& weights = {}, std::size_t limit = 10);

}  // namespace minsum

#endif  // MINSUM_EXACT_HPP
