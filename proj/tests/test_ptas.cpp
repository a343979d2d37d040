#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "minsum/exact.hpp"
#include "minsum/geometry.hpp"
#include "minsum/instances.hpp"
#include "minsum/kernels.hpp"
#include "minsum/ptas.hpp"
#include "minsum/rng.hpp"

using namespace minsum;

namespace {

Dataset random_dataset(rng::Engine& eng, std::size_t n, std::size_t d,
                       double scale = 5.0) {
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = scale * (rng::uniform01(eng) - 0.5);
  return Dataset(n, d, std::move(coords));
}

// a small budget that still runs the full pipeline in reasonable time
PtasConfig lean_config(std::uint64_t seed) {
  PtasConfig cfg;
  cfg.epsilon = 0.3;
  cfg.delta = 0.1;
  cfg.caps.max_sample = 24;
  cfg.caps.max_subset = 4;
  cfg.caps.max_leaves = 16;
  cfg.subset_budget = 24;
  cfg.max_extract = 40;
  cfg.profile_cap = 4000;
  cfg.exact_limit = 0;  // force the sampling pipeline
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("config validation and derived quantities") {
  PtasConfig cfg;
  cfg.validate();  // defaults are fine
  CHECK(cfg.beta_eff() == doctest::Approx(2400.0 / 0.09));
  CHECK(cfg.alpha_eff() == doctest::Approx(0.3 / 16.0));
  CHECK(cfg.gamma() ==
        doctest::Approx(std::sqrt(0.3 / (16.0 * (cfg.beta_eff() + cfg.alpha_eff())))));

  PtasConfig bad = cfg;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.beta = 10.0;  // below 2400 / eps^2
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.alpha_core = 0.1;  // above eps / 16
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // analyzed sample sizes dwarf the practical caps
  CHECK(cfg.uniform_sample_theoretical(3) ==
        doctest::Approx(32.0 * 3.0 / 0.3 * std::log(10.0)));
  CHECK(cfg.d2_sample_theoretical(2) > 1e12);
  CHECK(cfg.uniform_sample_size(3) <= cfg.caps.max_sample);
  CHECK(cfg.d2_sample_size(2) == cfg.caps.max_sample);
}

TEST_CASE("preprocess keeps small or close data in one component") {
  auto eng = rng::make_engine(81);
  Dataset ds = random_dataset(eng, 18, 2);
  PtasConfig cfg;
  PreprocessResult pre = preprocess_partition(ds, 3, cfg);
  CHECK(pre.components.size() == 1);
  CHECK(pre.components[0].size() == 18);
  CHECK(pre.kmeans_estimate >= 0.0);
}

TEST_CASE("preprocess splits astronomically separated blobs") {
  // two tight blobs 1e9 apart: the squared separation beats 20 n^7 T
  auto eng = rng::make_engine(82);
  std::vector<double> coords;
  for (int i = 0; i < 14; ++i)
    coords.push_back((i < 7 ? 0.0 : 1e9) + rng::uniform01(eng));
  Dataset ds(14, 1, std::move(coords));
  // n <= 20 stays whole by policy
  PtasConfig cfg;
  CHECK(preprocess_partition(ds, 2, cfg).components.size() == 1);

  std::vector<double> coords2;
  for (int i = 0; i < 26; ++i)
    coords2.push_back((i < 13 ? 0.0 : 1e9) + rng::uniform01(eng));
  Dataset ds2(26, 1, std::move(coords2));
  PreprocessResult pre = preprocess_partition(ds2, 2, cfg);
  REQUIRE(pre.components.size() == 2);
  CHECK(pre.components[0].size() + pre.components[1].size() == 26);
  // each component is one side of the gap
  for (const auto& comp : pre.components) {
    bool low = ds2.row(comp[0])[0] < 1e8;
    for (auto idx : comp) CHECK((ds2.row(idx)[0] < 1e8) == low);
  }
}

TEST_CASE("distance-mass levels are nested with halving thresholds") {
  auto eng = rng::make_engine(83);
  Dataset ds = random_dataset(eng, 30, 2);
  std::vector<double> center{0.0, 0.0};
  PtasConfig cfg;
  auto levels = d2_levels(ds, center, 1, cfg, 3);

  std::size_t expect =
      static_cast<std::size_t>(std::ceil(13.0 * std::log(30.0 * 3.0 / 0.3))) + 1;
  CHECK(levels.size() == expect);

  std::vector<double> md(30);
  kern::sqdist_batch(ds.data(), 30, 2, center.data(), md.data());
  double total = 0.0;
  for (double v : md) total += v;

  for (std::size_t i = 0; i < levels.size(); ++i) {
    CHECK(levels[i].gamma == doctest::Approx(std::ldexp(total, -static_cast<int>(i))));
    // members are exactly the points under the threshold
    for (std::size_t p = 0; p < 30; ++p) {
      bool inside = std::find(levels[i].members.begin(), levels[i].members.end(),
                              static_cast<std::uint32_t>(p)) != levels[i].members.end();
      CHECK(inside == (md[p] <= levels[i].gamma));
    }
    if (i > 0) {
      // nested: deeper members are a subset
      for (auto p : levels[i].members)
        CHECK(std::find(levels[i - 1].members.begin(), levels[i - 1].members.end(),
                        p) != levels[i - 1].members.end());
    }
  }
  CHECK(levels.back().degenerate);
  CHECK_THROWS_AS(d2_sample(levels.back(), 3, eng), DegenerateDistributionError);
}

TEST_CASE("distance-weighted sampling favors the far point") {
  // one point carries 99.9% of the distance mass
  std::vector<double> coords{0.0, 0.01, 0.02, 100.0};
  Dataset ds(4, 1, std::move(coords));
  std::vector<double> center{0.0};
  PtasConfig cfg;
  auto levels = d2_levels(ds, center, 1, cfg, 2);
  auto eng = rng::make_engine(84);
  auto sample = d2_sample(levels[0], 400, eng);
  std::size_t far_hits = 0;
  for (auto p : sample)
    if (p == 3) far_hits++;
  CHECK(far_hits > 390);
}

TEST_CASE("candidate extraction covers singletons and subset averages") {
  Dataset ds(5, 1, {0.0, 1.0, 2.0, 3.0, 10.0});
  std::vector<std::uint32_t> sample{0, 1, 2, 3, 4};
  PtasConfig cfg;
  cfg.caps.max_subset = 3;
  auto eng = rng::make_engine(85);
  auto cands = extract_candidate_means(ds, sample, {}, 0, cfg, eng);

  auto contains = [&](double v) {
    for (const auto& c : cands)
      if (std::fabs(c[0] - v) < 1e-12) return true;
    return false;
  };
  for (double v : {0.0, 1.0, 2.0, 3.0, 10.0}) CHECK(contains(v));
  CHECK(contains(0.5));   // average of {0, 1}
  CHECK(contains(2.0));   // average of {1, 3} collides with the singleton 2
  CHECK(contains(13.0 / 3.0));  // average of {0, 3, 10}

  std::set<std::vector<double>> dedup(cands.begin(), cands.end());
  CHECK(dedup.size() == cands.size());
  CHECK(cands.size() <= cfg.max_extract);
}

TEST_CASE("candidate extraction recovers a cluster mean from noisy samples") {
  // Monte-Carlo: points around two sites; sampling plus small-subset
  // averaging should produce a candidate near each site mean
  auto eng = rng::make_engine(86);
  PlantedInstance inst = gen_gaussian(GaussianSpec{40, 2, 2, 12.0, 0.8, 19});
  std::vector<std::uint32_t> sample;
  for (std::uint32_t i = 0; i < 40; ++i) sample.push_back(i);
  PtasConfig cfg;
  cfg.caps.max_subset = 6;
  cfg.max_extract = 512;
  cfg.subset_budget = 256;
  auto cands = extract_candidate_means(inst.points, sample, {}, 0, cfg, eng);

  auto stats = cluster_stats(inst.points, inst.truth);
  for (const auto& st : stats) {
    double best = 1e99;
    for (const auto& c : cands)
      best = std::min(best, kern::sqdist(c.data(), st.mean.data(), 2));
    // within the cluster radius of the true mean
    CHECK(best <= st.delta + 1.0);
  }
}

TEST_CASE("candidate tree produces ranked full center sets") {
  PlantedInstance inst = gen_gaussian(GaussianSpec{30, 2, 3, 10.0, 1.0, 7});
  PtasConfig cfg = lean_config(7);
  auto leaves = candidate_tree(inst.points, 3, cfg, 7);
  REQUIRE(!leaves.empty());
  CHECK(leaves.size() <= cfg.caps.max_leaves);
  for (const auto& leaf : leaves) {
    CHECK(leaf.count == 3);
    CHECK(leaf.centers.size() == 6);
    CHECK(leaf.provenance.size() == 3);
    CHECK(leaf.provenance[0] == CenterProvenance::UniformSeed);
    CHECK(leaf.seeding_cost >= 0.0);
    // seeding cost is the actual min-distance mass of the centers
    double check = 0.0;
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
      double mn = 1e99;
      for (std::size_t c = 0; c < 3; ++c)
        mn = std::min(mn, kern::sqdist(inst.points.row(i),
                                       leaf.centers.data() + c * 2, 2));
      check += mn;
    }
    CHECK(rel_close(check, leaf.seeding_cost, 1e-9));
  }
  // branch ids are unique
  std::set<std::vector<std::uint64_t>> ids;
  for (const auto& leaf : leaves) ids.insert(leaf.branch_id);
  CHECK(ids.size() == leaves.size());

  // the best leaf seeds the planted structure decently
  double best = 1e99;
  for (const auto& leaf : leaves) best = std::min(best, leaf.seeding_cost);
  auto stats = cluster_stats(inst.points, inst.truth);
  double truth_sse = 0.0;
  for (const auto& st : stats) truth_sse += st.sum_sq_dev;
  CHECK(best <= 4.0 * truth_sse);
}

TEST_CASE("some tree leaf approximately covers both planted clusters") {
  // A leaf covers the planted clustering when, for every true cluster, one
  // of its centers is an eps-approximate mean of that cluster.
  int covered = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t seed = 500 + static_cast<std::uint64_t>(t);
    PlantedInstance inst = gen_gaussian(GaussianSpec{40, 2, 2, 12.0, 1.0, seed});
    PtasConfig cfg;  // default caps {200, 6, 5000}
    cfg.epsilon = 0.5;
    cfg.delta = 0.2;
    cfg.seed = seed;
    auto leaves = candidate_tree(inst.points, 2, cfg, seed);
    auto stats = cluster_stats(inst.points, inst.truth);

    bool any = false;
    for (const auto& leaf : leaves) {
      bool all_clusters = true;
      for (std::size_t ci = 0; ci < 2; ++ci) {
        double delta = stats[ci].sum_sq_dev / static_cast<double>(stats[ci].size);
        bool hit = false;
        for (std::size_t c = 0; c < leaf.count && !hit; ++c)
          hit = kern::sqdist(leaf.centers.data() + c * 2,
                             stats[ci].mean.data(), 2) <= cfg.epsilon * delta;
        all_clusters = all_clusters && hit;
      }
      if (all_clusters) {
        any = true;
        break;
      }
    }
    if (any) covered++;
  }
  CHECK(covered >= 40);  // 80% of trials
}

TEST_CASE("optimum guess grid covers the interval geometrically") {
  auto grid = opt_guess_grid(2.0, 100.0, 0.25);
  REQUIRE(!grid.empty());
  CHECK(grid.front().value == doctest::Approx(2.0));
  CHECK(grid.back().value >= 100.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i].value == doctest::Approx(grid[i - 1].value * 1.25));
    CHECK(grid[i].index == i);
  }
  CHECK_THROWS_AS(opt_guess_grid(0.0, 1.0, 0.3), ConfigError);
}

TEST_CASE("bucketed assignment: served points, sandwich, rejection radius") {
  auto eng = rng::make_engine(87);
  for (int trial = 0; trial < 8; ++trial) {
    std::size_t n = 12 + rng::uniform_index(eng, 8);
    Dataset ds = random_dataset(eng, n, 2, 8.0);
    ExactResult opt = brute_force_minsum(ds, 2, 20);

    // candidate centers: means of the optimal clusters
    auto stats = cluster_stats(ds, opt.labeling);
    CandidateCenters cand;
    cand.count = 2;
    for (const auto& st : stats)
      for (double v : st.mean) cand.centers.push_back(v);
    cand.provenance = {CenterProvenance::UniformSeed, CenterProvenance::D2Extracted};
    cand.branch_id = {0};

    PtasConfig cfg = lean_config(1);
    double ohat = std::max(opt.cost, 1e-6);
    auto res = assign_by_buckets(ds, cand, OptGuess{ohat, 0}, cfg);
    REQUIRE(res.has_value());
    validate_labeling(res->labeling, n);

    double eps = cfg.epsilon;
    // estimate brackets the exact center cost
    CHECK(res->center_cost <= res->estimate + eps * ohat + 1e-9);
    CHECK(res->estimate <= (1.0 + eps) * res->center_cost + eps * ohat + 1e-9);

    // no point was assigned beyond the service radius
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = static_cast<std::size_t>(res->labeling.labels[i]);
      double dd = kern::sqdist(ds.row(i), cand.centers.data() + c * 2, 2);
      CHECK(dd <= (1.0 + eps) * ohat + 1e-9);
    }
  }
}

TEST_CASE("bucketed assignment rejects an inadequate guess") {
  Dataset ds(2, 1, {0.0, 100.0});
  CandidateCenters cand;
  cand.count = 1;
  cand.centers = {0.0};
  cand.provenance = {CenterProvenance::UniformSeed};
  cand.branch_id = {0};
  PtasConfig cfg = lean_config(1);
  auto res = assign_by_buckets(ds, cand, OptGuess{1.0, 0}, cfg);
  CHECK_FALSE(res.has_value());
}

TEST_CASE("tiny instances route to the exhaustive solver") {
  auto eng = rng::make_engine(88);
  for (int trial = 0; trial < 5; ++trial) {
    std::size_t n = 5 + rng::uniform_index(eng, 6);
    Dataset ds = random_dataset(eng, n, 2);
    PtasConfig cfg;  // default exact_limit 13
    PtasResult res = solve_ptas(ds, 2, cfg);
    ExactResult opt = brute_force_minsum(ds, 2);
    CHECK(rel_close(res.report.minsum_cost, opt.cost, 1e-9));
    CHECK(std::find(res.flags.begin(), res.flags.end(), "routed_exact") !=
          res.flags.end());
  }
}

TEST_CASE("identical points short-circuit to cost zero") {
  std::vector<double> coords;
  for (int i = 0; i < 30; ++i) coords.push_back(i % 2 == 0 ? 1.0 : 4.0);
  Dataset ds(30, 1, std::move(coords));
  PtasConfig cfg = lean_config(1);
  PtasResult res = solve_ptas(ds, 2, cfg);
  CHECK(res.report.minsum_cost == doctest::Approx(0.0));
  CHECK(std::find(res.flags.begin(), res.flags.end(), "identical_points_shortcut") !=
        res.flags.end());
}

TEST_CASE("forced pipeline stays near the optimum on small instances") {
  // the acceptance-level guarantee, exercised here without the exact-route
  // shortcut and with lean budgets
  auto eng = rng::make_engine(89);
  int within = 0, total = 0;
  for (int trial = 0; trial < 12; ++trial) {
    std::size_t n = 6 + rng::uniform_index(eng, 5);  // 6..10
    std::size_t d = 1 + rng::uniform_index(eng, 3);
    std::int32_t k = 2 + static_cast<std::int32_t>(rng::uniform_index(eng, 2));
    Dataset ds = random_dataset(eng, n, d);
    ExactResult opt = brute_force_minsum(ds, k);
    PtasConfig cfg = lean_config(1000 + static_cast<std::uint64_t>(trial));
    PtasResult res = solve_ptas(ds, k, cfg);
    total++;
    if (res.report.minsum_cost <= 1.3 * opt.cost + 1e-9) within++;
  }
  CHECK(within >= total - 1);
}

TEST_CASE("pipeline on planted blobs lands near the planted cost") {
  PlantedInstance inst = gen_gaussian(GaussianSpec{60, 2, 3, 12.0, 1.0, 33});
  double planted = minsum_cost(inst.points, inst.truth);
  PtasConfig cfg = lean_config(33);
  cfg.caps.max_leaves = 8;
  PtasResult res = solve_ptas(inst.points, 3, cfg);
  CHECK(res.report.minsum_cost <= 1.1 * planted);
  CHECK(res.leaves > 0);
  CHECK(res.guesses > 0);
  CHECK(res.assignments_tried > 0);
}

TEST_CASE("far components are solved jointly via center compositions") {
  // two well-separated uniform blocks, k = 2, forced pipeline
  auto eng = rng::make_engine(90);
  std::vector<double> coords;
  for (int i = 0; i < 26; ++i)
    coords.push_back((i < 13 ? 0.0 : 1e9) + rng::uniform01(eng));
  Dataset ds(26, 1, std::move(coords));
  PtasConfig cfg = lean_config(5);
  PtasResult res = solve_ptas(ds, 2, cfg);

  // optimal: one cluster per side; compare against that labeling's cost
  std::vector<std::int32_t> side(26);
  for (int i = 0; i < 26; ++i) side[i] = i < 13 ? 0 : 1;
  double side_cost = minsum_cost(ds, Labeling{side, 2});
  CHECK(res.report.minsum_cost <= 1.3 * side_cost + 1e-9);
}

TEST_CASE("pipeline determinism for a fixed seed") {
  PlantedInstance inst = gen_gaussian(GaussianSpec{24, 2, 2, 9.0, 1.0, 12});
  PtasConfig cfg = lean_config(4);
  PtasResult a = solve_ptas(inst.points, 2, cfg);
  PtasResult b = solve_ptas(inst.points, 2, cfg);
  CHECK(a.report.minsum_cost == b.report.minsum_cost);
  CHECK(a.labeling.labels == b.labeling.labels);
  CHECK(a.flags == b.flags);
}
