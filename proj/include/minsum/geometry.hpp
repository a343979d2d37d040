#ifndef MINSUM_GEOMETRY_HPP
#define MINSUM_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "minsum/common.hpp"

namespace minsum {

// Point set, row major, all coordinates finite.
class Dataset {
 public:
  Dataset(std::size_t n, std::size_t d, std::vector<double> coords);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  const double* row(std::size_t i) const { return coords_.data() + i * d_; }
  const double* data() const { return coords_.data(); }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> coords_;
};

// Assignment of each point to one of k clusters.  Clusters may be empty.
struct Labeling {
  std::vector<std::int32_t> labels;
  std::int32_t k = 0;
};

// Throws InvalidLabelingError unless labels has length n and every value
// lies in [0, k).
void validate_labeling(const Labeling& lab, std::size_t n);

struct ClusterStats {
  std::size_t size = 0;
  std::vector<double> mean;   // NaN sentinel when the cluster is empty
  double sum_sq_dev = 0.0;    // sum over members of squared distance to mean
  double delta = 0.0;         // sum_sq_dev / size, 0 for empty clusters
  bool has_mean() const { return size > 0; }
};

struct CostReport {
  double minsum_cost = 0.0;
  double kmeans_cost = 0.0;  // cost with centers at the cluster means
  std::vector<double> per_cluster;  // minsum contribution per cluster
  std::optional<double> ratio_vs_reference;
};

// Mean of the rows listed in `members`.  Throws EmptyClusterError when
// members is empty.
std::vector<double> mean_of(const Dataset& ds, const std::vector<std::uint32_t>& members);

std::vector<ClusterStats> cluster_stats(const Dataset& ds, const Labeling& lab);

// Cost under the convention: sum over clusters of |C| times the within-cluster
// sum of squared deviations from the mean.  Equivalently the sum over
// unordered same-cluster pairs of squared distance.  O(n d).
double minsum_cost(const Dataset& ds, const Labeling& lab);

// Same value computed directly over point pairs, O(n^2 d).  Kept as an
// independent cross-check of the closed form, not for production use.
double minsum_cost_pairwise(const Dataset& ds, const Labeling& lab);

// Sum over points of squared distance to the center of their cluster.
// centers is k x d row major.  Throws MismatchError if the center count does
// not match lab.k.
double kmeans_cost(const Dataset& ds, const std::vector<double>& centers,
                   const Labeling& lab);

CostReport make_cost_report(const Dataset& ds, const Labeling& lab,
                            std::optional<double> reference_cost = std::nullopt);

}  // namespace minsum

#endif  // MINSUM_GEOMETRY_HPP
