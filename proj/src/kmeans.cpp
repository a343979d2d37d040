#include "minsum/kmeans.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "minsum/kernels.hpp"

namespace minsum {

KmeansResult kmeans_baseline(const Dataset& ds, std::int32_t k,
                             std::uint64_t seed, std::size_t max_iters) {
  std::size_t n = ds.size(), d = ds.dim(), kk = static_cast<std::size_t>(k);
  if (k < 1) throw InvalidLabelingError("kmeans_baseline needs k >= 1");

  auto eng = rng::make_engine(seed, {0x6b6d});
  std::vector<double> centers;
  centers.reserve(kk * d);

  // seeding: first center uniform, then proportional to current min squared
  // distance; a zero total mass means every point already coincides with a
  // center and any remaining seeds can repeat the first point
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  std::size_t first = rng::uniform_index(eng, n);
  centers.insert(centers.end(), ds.row(first), ds.row(first) + d);
  kern::sqdist_batch(ds.data(), n, d, ds.row(first), mind.data());

  std::vector<double> cum(n);
  while (centers.size() < kk * d) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += mind[i];
      cum[i] = total;
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = first;
    } else {
      pick = rng::sample_cumulative(cum, eng);
    }
    centers.insert(centers.end(), ds.row(pick), ds.row(pick) + d);
    std::vector<double> dist(n);
    kern::sqdist_batch(ds.data(), n, d, ds.row(pick), dist.data());
    for (std::size_t i = 0; i < n; ++i) mind[i] = std::min(mind[i], dist[i]);
  }

  std::vector<std::int32_t> labels(n, 0);
  std::vector<double> best(n);
  std::size_t iters = 0;
  for (; iters < max_iters; ++iters) {
    kern::min_sqdist_batch(ds.data(), n, d, centers.data(), kk, best.data(), labels.data());

    std::vector<double> sums(kk * d, 0.0);
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = static_cast<std::size_t>(labels[i]);
      counts[c]++;
      const double* p = ds.row(i);
      for (std::size_t j = 0; j < d; ++j) sums[c * d + j] += p[j];
    }
    bool moved = false;
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its center
      for (std::size_t j = 0; j < d; ++j) {
        double v = sums[c * d + j] / static_cast<double>(counts[c]);
        if (v != centers[c * d + j]) moved = true;
        centers[c * d + j] = v;
      }
    }
    if (!moved) {
      ++iters;
      break;
    }
  }

  kern::min_sqdist_batch(ds.data(), n, d, centers.data(), kk, best.data(), labels.data());
  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) cost += best[i];

  KmeansResult res;
  res.centers = std::move(centers);
  res.labeling = Labeling{std::move(labels), k};
  res.cost = cost;
  res.iterations = iters;
  return res;
}

}  // namespace minsum
