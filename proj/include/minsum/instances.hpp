#ifndef MINSUM_INSTANCES_HPP
#define MINSUM_INSTANCES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "minsum/geometry.hpp"

namespace minsum {

struct GaussianSpec {
  std::size_t n = 60;
  std::size_t d = 2;
  std::int32_t k = 3;
  double separation = 10.0;  // minimum distance between planted centers
  double sigma = 1.0;
  std::uint64_t seed = 1;
};

struct PlantedInstance {
  Dataset points;
  Labeling truth;
};

// Isotropic Gaussian blobs around planted centers placed `separation` apart
// along the first axis.  Cluster sizes differ by at most one.
PlantedInstance gen_gaussian(const GaussianSpec& spec);

struct RingsSpec {
  std::size_t inner_count = 12;
  std::size_t outer_count = 12;
  double inner_radius = 1.0;
  double outer_radius = 3.0;
  double jitter = 0.0;  // gaussian coordinate noise, fraction of inner radius
  std::uint64_t seed = 1;
};

struct RingsInstance {
  Dataset points;            // d = 2
  Labeling ring_partition;   // 0 = inner ring, 1 = outer ring
  Labeling halfplane_partition;  // best split by a vertical line
};

// Two concentric circles, points at evenly spaced angles (offset half a step
// so no point sits on the y-axis) plus optional jitter.  The halfplane
// labeling is the vertical-line split minimizing the 2-means objective.
RingsInstance gen_rings(const RingsSpec& spec);

// Axis-aligned lattice filled row major; no reference labeling.
Dataset gen_grid(std::size_t n, std::size_t d, double spacing = 1.0);

// --- set-system point instances ----------------------------------------

struct SetSystem {
  std::size_t universe = 0;              // elements are 1..universe
  std::size_t set_size = 0;              // z
  std::vector<std::vector<std::uint32_t>> sets;  // each sorted, length z
};

void validate_set_system(const SetSystem& sys);

// Characteristic 0/1 vectors of the sets, one point per set, d = universe.
// Squared distances are the exact integers 2z - 2|T intersect T'|.
Dataset set_system_points(const SetSystem& sys);

struct CoverSystemSpec {
  std::size_t universe = 12;
  std::size_t z = 3;
  std::int32_t k = 3;
  std::size_t sets_per_part = 4;
  std::uint64_t seed = 1;
};

struct CoverSystemInstance {
  SetSystem sets;
  Labeling truth;  // part index per set
  std::vector<std::vector<std::uint32_t>> part_cores;  // the common (z-1)-set per part
};

// Yes-side construction: k disjoint (z-1)-element cores, each extended by
// sets_per_part distinct extra elements.  Within a part every two sets share
// exactly the core, so their squared distance is exactly 2; the planted
// partition therefore costs k * m/k * (m/k - 1) with m = k * sets_per_part.
CoverSystemInstance gen_cover_system(const CoverSystemSpec& spec);

// Uncertified no-side generation: random distinct z-sets.
SetSystem gen_random_sets(std::size_t universe, std::size_t z, std::size_t count,
                          std::uint64_t seed);

// Debug search: does any choice of k many (z-1)-sets cover all sets (one core
// inside each set)?  Exhaustive, universe <= 12 only.
std::optional<std::vector<std::vector<std::uint32_t>>> cover_search(
    const SetSystem& sys, std::int32_t k);

// Gaussian random projection to ceil(8 ln n / eps^2) dimensions, entries
// scaled by the inverse square root of the target dimension.
Dataset jl_project(const Dataset& ds, double eps, std::uint64_t seed);

}  // namespace minsum

#endif  // MINSUM_INSTANCES_HPP
