#include "minsum/geometry.hpp"

#include <cmath>
#include <limits>

#include "minsum/kernels.hpp"

namespace minsum {

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> coords)
    : n_(n), d_(d), coords_(std::move(coords)) {
  if (n_ == 0 || d_ == 0) throw MinsumError("dataset must have n >= 1 and d >= 1");
  if (coords_.size() != n_ * d_)
    throw MinsumError("dataset coordinate buffer has wrong length");
  for (double v : coords_)
    if (!std::isfinite(v)) throw MinsumError("dataset contains a non-finite coordinate");
}

void validate_labeling(const Labeling& lab, std::size_t n) {
  if (lab.k < 1) throw InvalidLabelingError("labeling needs k >= 1");
  if (lab.labels.size() != n)
    throw InvalidLabelingError("labeling length does not match point count");
  for (std::int32_t v : lab.labels)
    if (v < 0 || v >= lab.k)
      throw InvalidLabelingError("label out of range [0, k)");
}

std::vector<double> mean_of(const Dataset& ds, const std::vector<std::uint32_t>& members) {
  if (members.empty()) throw EmptyClusterError("mean of an empty cluster");
  std::vector<double> m(ds.dim(), 0.0);
  for (std::uint32_t idx : members) {
    const double* p = ds.row(idx);
    for (std::size_t j = 0; j < ds.dim(); ++j) m[j] += p[j];
  }
  for (double& v : m) v /= static_cast<double>(members.size());
  return m;
}

std::vector<ClusterStats> cluster_stats(const Dataset& ds, const Labeling& lab) {
  validate_labeling(lab, ds.size());
  std::size_t k = static_cast<std::size_t>(lab.k), d = ds.dim();
  std::vector<ClusterStats> stats(k);
  for (auto& st : stats) st.mean.assign(d, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::size_t c = static_cast<std::size_t>(lab.labels[i]);
    stats[c].size++;
    const double* p = ds.row(i);
    for (std::size_t j = 0; j < d; ++j) sums[c][j] += p[j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (stats[c].size == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      stats[c].mean[j] = sums[c][j] / static_cast<double>(stats[c].size);
  }
  // second pass keeps the deviation sums stable far from the origin
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::size_t c = static_cast<std::size_t>(lab.labels[i]);
    stats[c].sum_sq_dev += kern::sqdist(ds.row(i), stats[c].mean.data(), d);
  }
  for (auto& st : stats)
    if (st.size > 0) st.delta = st.sum_sq_dev / static_cast<double>(st.size);
  return stats;
}

double minsum_cost(const Dataset& ds, const Labeling& lab) {
  auto stats = cluster_stats(ds, lab);
  double total = 0.0;
  for (const auto& st : stats)
    total += static_cast<double>(st.size) * st.sum_sq_dev;
  return total;
}

double minsum_cost_pairwise(const Dataset& ds, const Labeling& lab) {
  validate_labeling(lab, ds.size());
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j)
      if (lab.labels[i] == lab.labels[j])
        total += kern::sqdist(ds.row(i), ds.row(j), ds.dim());
  return total;
}

double kmeans_cost(const Dataset& ds, const std::vector<double>& centers,
                   const Labeling& lab) {
  validate_labeling(lab, ds.size());
  if (centers.size() != static_cast<std::size_t>(lab.k) * ds.dim())
    throw MismatchError("center count does not match labeling k");
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double* c = centers.data() + static_cast<std::size_t>(lab.labels[i]) * ds.dim();
    total += kern::sqdist(ds.row(i), c, ds.dim());
  }
  return total;
}

CostReport make_cost_report(const Dataset& ds, const Labeling& lab,
                            std::optional<double> reference_cost) {
  auto stats = cluster_stats(ds, lab);
  CostReport rep;
  rep.per_cluster.reserve(stats.size());
  for (const auto& st : stats) {
    double contrib = static_cast<double>(st.size) * st.sum_sq_dev;
    rep.per_cluster.push_back(contrib);
    rep.minsum_cost += contrib;
    rep.kmeans_cost += st.sum_sq_dev;
  }
  if (reference_cost.has_value()) {
    double ref = *reference_cost;
    if (ref > 0.0)
      rep.ratio_vs_reference = rep.minsum_cost / ref;
    else if (rep.minsum_cost == 0.0)
      rep.ratio_vs_reference = 1.0;
  }
  return rep;
}

}  // namespace minsum
