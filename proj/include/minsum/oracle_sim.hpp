#ifndef MINSUM_ORACLE_SIM_HPP
#define MINSUM_ORACLE_SIM_HPP

#include <cstdint>
#include <vector>

#include "minsum/geometry.hpp"

namespace minsum {

struct LabelMove {
  std::uint32_t point = 0;
  std::int32_t from = 0;
  std::int32_t to = 0;
};

struct CorruptionPlan {
  Labeling labels;
  double alpha_target = 0.0;
  double alpha_achieved = 0.0;
  std::vector<LabelMove> moves;
};

// Produces noisy labels from a reference labeling by swapping points pairwise
// between clusters.  Swaps preserve all cluster sizes; the per-cluster error
// rate is pushed to the largest value achievable without exceeding alpha.
// Requires alpha in [0, 0.5) and every reference cluster nonempty.
CorruptionPlan corrupt_labels(const Labeling& truth, double alpha,
                              std::uint64_t seed);

// Worst per-cluster disagreement rate between two labelings after matching
// predicted clusters to reference clusters by maximum overlap (exact
// assignment via min-cost flow).  Both labelings must cover the same points.
double verify_error_rate(const Labeling& predicted, const Labeling& truth);

}  // namespace minsum

#endif  // MINSUM_ORACLE_SIM_HPP
