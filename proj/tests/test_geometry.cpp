#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "minsum/geometry.hpp"
#include "minsum/kernels.hpp"
#include "minsum/rng.hpp"

using namespace minsum;

namespace {

Dataset random_dataset(rng::Engine& eng, std::size_t n, std::size_t d,
                       double scale = 5.0) {
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = scale * (rng::uniform01(eng) * 2.0 - 1.0);
  return Dataset(n, d, std::move(coords));
}

Labeling random_labeling(rng::Engine& eng, std::size_t n, std::int32_t k) {
  std::vector<std::int32_t> labels(n);
  for (auto& l : labels)
    l = static_cast<std::int32_t>(rng::uniform_index(eng, static_cast<std::uint64_t>(k)));
  return Labeling{std::move(labels), k};
}

std::vector<std::uint32_t> all_members(std::size_t n) {
  std::vector<std::uint32_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::uint32_t>(i);
  return m;
}

}  // namespace

TEST_CASE("mean decomposition identity against arbitrary probes") {
  // sum ||p - c||^2 = sum ||p - mu||^2 + |A| ||mu - c||^2
  auto eng = rng::make_engine(101);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng::uniform_index(eng, 40);
    std::size_t d = 1 + rng::uniform_index(eng, 6);
    Dataset ds = random_dataset(eng, n, d);
    auto mu = mean_of(ds, all_members(n));
    std::vector<double> probe(d);
    for (auto& x : probe) x = 10.0 * (rng::uniform01(eng) - 0.5);

    double lhs = 0.0, ssd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += kern::sqdist(ds.row(i), probe.data(), d);
      ssd += kern::sqdist(ds.row(i), mu.data(), d);
    }
    double rhs = ssd + static_cast<double>(n) *
                           kern::sqdist(mu.data(), probe.data(), d);
    CHECK(rel_close(lhs, rhs, 1e-9));
  }
}

TEST_CASE("pair sum identity: sum over pairs equals n times the deviation sum") {
  auto eng = rng::make_engine(102);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng::uniform_index(eng, 30);
    std::size_t d = 1 + rng::uniform_index(eng, 5);
    Dataset ds = random_dataset(eng, n, d);
    auto mu = mean_of(ds, all_members(n));
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        pair_sum += kern::sqdist(ds.row(i), ds.row(j), d);
    double ssd = 0.0;
    for (std::size_t i = 0; i < n; ++i) ssd += kern::sqdist(ds.row(i), mu.data(), d);
    CHECK(rel_close(pair_sum, static_cast<double>(n) * ssd, 1e-9));
  }
}

TEST_CASE("approximate-mean characterization holds in both directions") {
  // c within eps * delta of the mean  <=>  sum ||p - c||^2 <= (1+eps) n delta
  auto eng = rng::make_engine(103);
  for (double eps : {0.1, 0.5}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::size_t n = 2 + rng::uniform_index(eng, 30);
      std::size_t d = 1 + rng::uniform_index(eng, 4);
      Dataset ds = random_dataset(eng, n, d);
      auto mu = mean_of(ds, all_members(n));
      double ssd = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        ssd += kern::sqdist(ds.row(i), mu.data(), d);
      double delta = ssd / static_cast<double>(n);

      std::vector<double> c(d);
      for (std::size_t j = 0; j < d; ++j)
        c[j] = mu[j] + (rng::uniform01(eng) - 0.5) * std::sqrt(std::max(delta, 1e-12));
      double lhs = 0.0;
      for (std::size_t i = 0; i < n; ++i) lhs += kern::sqdist(ds.row(i), c.data(), d);

      bool near = kern::sqdist(c.data(), mu.data(), d) <= eps * delta + 1e-12;
      bool cheap = lhs <= (1.0 + eps) * static_cast<double>(n) * delta + 1e-9;
      CHECK(near == cheap);
    }
  }
}

TEST_CASE("weak triangle inequality for squared differences") {
  auto eng = rng::make_engine(104);
  for (double eps : {0.1, 1.0, 10.0}) {
    for (int trial = 0; trial < 300; ++trial) {
      double a = 20.0 * (rng::uniform01(eng) - 0.5);
      double b = 20.0 * (rng::uniform01(eng) - 0.5);
      double c = 20.0 * (rng::uniform01(eng) - 0.5);
      double lhs = (a - b) * (a - b);
      double rhs = (1.0 + eps) * (a - c) * (a - c) +
                   (1.0 + 1.0 / eps) * (b - c) * (b - c);
      CHECK(lhs <= rhs + 1e-9 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("core of a cluster keeps most points and an approximate mean") {
  // points within beta * delta of the mean: at least (1 - 1/beta) of the
  // cluster survives, and the surviving mean is an eps-approximate mean
  auto eng = rng::make_engine(105);
  double eps = 0.4;
  double beta = 12.0 / (eps * eps);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 5 + rng::uniform_index(eng, 60);
    std::size_t d = 1 + rng::uniform_index(eng, 4);
    Dataset ds = random_dataset(eng, n, d);
    auto mu = mean_of(ds, all_members(n));
    double ssd = 0.0;
    for (std::size_t i = 0; i < n; ++i) ssd += kern::sqdist(ds.row(i), mu.data(), d);
    double delta = ssd / static_cast<double>(n);

    std::vector<std::uint32_t> core;
    for (std::size_t i = 0; i < n; ++i)
      if (kern::sqdist(ds.row(i), mu.data(), d) <= beta * delta + 1e-12)
        core.push_back(static_cast<std::uint32_t>(i));

    CHECK(static_cast<double>(core.size()) >=
          (1.0 - 1.0 / beta) * static_cast<double>(n) - 1e-9);

    auto core_mu = mean_of(ds, core);
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      lhs += kern::sqdist(ds.row(i), core_mu.data(), d);
    CHECK(lhs <= (1.0 + eps) * static_cast<double>(n) * delta + 1e-9);
  }
}

TEST_CASE("closed-form minsum equals the pairwise evaluator") {
  auto eng = rng::make_engine(106);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng::uniform_index(eng, 50);
    std::size_t d = 1 + rng::uniform_index(eng, 6);
    std::int32_t k = 1 + static_cast<std::int32_t>(rng::uniform_index(eng, 5));
    Dataset ds = random_dataset(eng, n, d);
    Labeling lab = random_labeling(eng, n, k);
    double a = minsum_cost(ds, lab);
    double b = minsum_cost_pairwise(ds, lab);
    CHECK(rel_close(a, b, 1e-9));
  }
}

TEST_CASE("cluster stats on worked examples") {
  Dataset ds(3, 2, {0.0, 0.0, 2.0, 0.0, 7.0, 7.0});
  Labeling lab{{0, 0, 2}, 3};
  auto stats = cluster_stats(ds, lab);
  REQUIRE(stats.size() == 3);
  CHECK(stats[0].size == 2);
  CHECK(stats[0].mean[0] == doctest::Approx(1.0));
  CHECK(stats[0].mean[1] == doctest::Approx(0.0));
  CHECK(stats[0].sum_sq_dev == doctest::Approx(2.0));
  CHECK(stats[0].delta == doctest::Approx(1.0));
  CHECK(stats[1].size == 0);
  CHECK_FALSE(stats[1].has_mean());
  CHECK(std::isnan(stats[1].mean[0]));
  CHECK(stats[1].sum_sq_dev == 0.0);
  CHECK(stats[2].size == 1);
  CHECK(stats[2].sum_sq_dev == doctest::Approx(0.0));

  // minsum: cluster 0 contributes 2 * 2 = 4, singletons contribute 0
  CHECK(minsum_cost(ds, lab) == doctest::Approx(4.0));
  // pairwise route: single pair at squared distance 4
  CHECK(minsum_cost_pairwise(ds, lab) == doctest::Approx(4.0));
}

TEST_CASE("kmeans cost and report plumbing") {
  Dataset ds(4, 1, {0.0, 1.0, 10.0, 11.0});
  Labeling lab{{0, 0, 1, 1}, 2};
  std::vector<double> centers{0.5, 10.5};
  CHECK(kmeans_cost(ds, centers, lab) == doctest::Approx(1.0));
  CHECK_THROWS_AS(kmeans_cost(ds, std::vector<double>{0.5}, lab), MismatchError);

  CostReport rep = make_cost_report(ds, lab, 1.0);
  CHECK(rep.minsum_cost == doctest::Approx(2.0));
  CHECK(rep.kmeans_cost == doctest::Approx(1.0));
  REQUIRE(rep.per_cluster.size() == 2);
  CHECK(rep.per_cluster[0] == doctest::Approx(1.0));
  REQUIRE(rep.ratio_vs_reference.has_value());
  CHECK(*rep.ratio_vs_reference == doctest::Approx(2.0));
}

TEST_CASE("validation rejects malformed inputs") {
  CHECK_THROWS_AS(Dataset(2, 2, {1.0, 2.0, 3.0}), MinsumError);
  CHECK_THROWS_AS(Dataset(1, 1, {std::nan("")}), MinsumError);
  Dataset ds(2, 1, {0.0, 1.0});
  CHECK_THROWS_AS(validate_labeling(Labeling{{0, 2}, 2}, 2), InvalidLabelingError);
  CHECK_THROWS_AS(validate_labeling(Labeling{{0}, 2}, 2), InvalidLabelingError);
  CHECK_THROWS_AS(validate_labeling(Labeling{{-1, 0}, 2}, 2), InvalidLabelingError);
  CHECK_THROWS_AS(mean_of(ds, {}), EmptyClusterError);
}
