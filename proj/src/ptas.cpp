#include "minsum/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "minsum/exact.hpp"
#include "minsum/flow.hpp"
#include "minsum/kernels.hpp"
#include "minsum/kmeans.hpp"

namespace minsum {

void PtasConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (beta > 0.0 && beta < 2400.0 / (epsilon * epsilon))
    throw ConfigError("beta must be at least 2400 / epsilon^2");
  if (alpha_core > 0.0 && alpha_core > epsilon / 16.0)
    throw ConfigError("alpha_core must not exceed epsilon / 16");
  if (caps.max_sample < 1 || caps.max_subset < 1 || caps.max_leaves < 1)
    throw ConfigError("practical caps must be at least 1");
  if (weight_steps < 1) throw ConfigError("weight_steps must be at least 1");
}

double PtasConfig::gamma() const {
  return std::sqrt(epsilon / (16.0 * (beta_eff() + alpha_eff())));
}

double PtasConfig::uniform_sample_theoretical(std::size_t k) const {
  return 32.0 * static_cast<double>(k) / epsilon * std::log(1.0 / delta);
}

std::size_t PtasConfig::uniform_sample_size(std::size_t k) const {
  double t = std::ceil(uniform_sample_theoretical(k));
  double capped = std::min(t, static_cast<double>(caps.max_sample));
  return static_cast<std::size_t>(std::max(1.0, capped));
}

double PtasConfig::d2_sample_theoretical(std::size_t k) const {
  double b = std::pow(beta_eff(), 7.0 / 12.0) / epsilon;
  return 17825792.0 * static_cast<double>(k) * std::pow(b, 6.0) *
         std::log(2.0 / delta);
}

std::size_t PtasConfig::d2_sample_size(std::size_t k) const {
  double t = std::ceil(d2_sample_theoretical(k));
  double capped = std::min(t, static_cast<double>(caps.max_sample));
  return static_cast<std::size_t>(std::max(1.0, capped));
}

// ---------------------------------------------------------------- preprocess

PreprocessResult preprocess_partition(const Dataset& ds, std::int32_t k,
                                      const PtasConfig& cfg) {
  cfg.validate();
  if (k < 1) throw ConfigError("preprocess_partition needs k >= 1");
  std::size_t n = ds.size(), kk = static_cast<std::size_t>(k);

  KmeansResult base = kmeans_baseline(ds, k, cfg.seed);

  PreprocessResult out;
  out.kmeans_estimate = base.cost;

  // The separation argument needs room; small instances stay whole.
  if (n <= 20 || base.cost <= 0.0) {
    out.components.emplace_back();
    for (std::size_t i = 0; i < n; ++i)
      out.components.back().push_back(static_cast<std::uint32_t>(i));
    return out;
  }

  double nn = static_cast<double>(n);
  double threshold = 20.0 * std::pow(nn, 7.0) * base.cost;

  std::vector<std::size_t> root(kk);
  std::iota(root.begin(), root.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (root[a] != a) {
      root[a] = root[root[a]];
      a = root[a];
    }
    return a;
  };
  for (std::size_t a = 0; a < kk; ++a)
    for (std::size_t b = a + 1; b < kk; ++b) {
      double dd = kern::sqdist(base.centers.data() + a * ds.dim(),
                               base.centers.data() + b * ds.dim(), ds.dim());
      if (dd <= threshold) root[find(a)] = find(b);
    }

  std::map<std::size_t, std::size_t> comp_of_root;
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = find(static_cast<std::size_t>(base.labeling.labels[i]));
    auto [it, fresh] = comp_of_root.try_emplace(c, comps.size());
    if (fresh) comps.emplace_back();
    comps[it->second].push_back(static_cast<std::uint32_t>(i));
  }
  out.components = std::move(comps);
  return out;
}

// -------------------------------------------------------------- sampling

UniformSeedResult uniform_seed(const Dataset& ds, std::int32_t k,
                               const PtasConfig& cfg, rng::Engine& eng) {
  cfg.validate();
  UniformSeedResult res;
  res.theoretical_size = cfg.uniform_sample_theoretical(static_cast<std::size_t>(k));
  std::size_t m = cfg.uniform_sample_size(static_cast<std::size_t>(k));
  res.capped = std::ceil(res.theoretical_size) > static_cast<double>(m);
  res.sample.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    res.sample.push_back(static_cast<std::uint32_t>(rng::uniform_index(eng, ds.size())));
  return res;
}

std::vector<PruneLevel> d2_levels(const Dataset& ds,
                                  const std::vector<double>& centers,
                                  std::size_t center_count,
                                  const PtasConfig& cfg, std::int32_t k) {
  cfg.validate();
  std::size_t n = ds.size();
  if (center_count == 0 || centers.size() != center_count * ds.dim())
    throw MismatchError("d2_levels: bad center block");

  std::vector<double> md(n);
  kern::min_sqdist_batch(ds.data(), n, ds.dim(), centers.data(), center_count,
                         md.data(), nullptr);
  double total = std::accumulate(md.begin(), md.end(), 0.0);

  double levels_f = 13.0 * std::log(static_cast<double>(n) *
                                    static_cast<double>(k) / cfg.epsilon);
  std::size_t level_count = static_cast<std::size_t>(std::max(0.0, std::ceil(levels_f))) + 1;

  std::vector<PruneLevel> out;
  out.reserve(level_count);
  for (std::size_t i = 0; i < level_count; ++i) {
    PruneLevel lv;
    lv.index = i;
    lv.gamma = std::ldexp(total, -static_cast<int>(i));
    double acc = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (md[p] <= lv.gamma) {
        lv.members.push_back(static_cast<std::uint32_t>(p));
        acc += md[p];
        lv.cum_weight.push_back(acc);
      }
    }
    lv.total_weight = acc;
    lv.degenerate = lv.members.empty() || !(acc > 0.0);
    out.push_back(std::move(lv));
  }
  return out;
}

std::vector<std::uint32_t> d2_sample(const PruneLevel& level, std::size_t count,
                                     rng::Engine& eng) {
  if (level.degenerate)
    throw DegenerateDistributionError("d2_sample on a degenerate level");
  std::vector<std::uint32_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(level.members[rng::sample_cumulative(level.cum_weight, eng)]);
  return out;
}

// ---------------------------------------------------- candidate extraction

namespace {

std::uint64_t fold_ids(std::uint64_t seed, const std::vector<std::uint64_t>& ids) {
  std::uint64_t h = rng::splitmix(seed);
  for (std::uint64_t v : ids) h = rng::splitmix(h ^ v);
  return h;
}

struct CandidatePool {
  std::vector<std::vector<double>> points;  // deduplicated sample + centers
  std::vector<double> centroid;             // of the raw sample
};

CandidatePool build_pool(const Dataset& ds, const std::vector<std::uint32_t>& sample,
                         const std::vector<double>& centers, std::size_t center_count) {
  std::size_t d = ds.dim();
  CandidatePool pool;
  pool.centroid.assign(d, 0.0);
  std::set<std::vector<double>> seen;
  for (std::uint32_t idx : sample) {
    std::vector<double> p(ds.row(idx), ds.row(idx) + d);
    for (std::size_t j = 0; j < d; ++j) pool.centroid[j] += p[j];
    if (seen.insert(p).second) pool.points.push_back(std::move(p));
  }
  if (!sample.empty())
    for (double& v : pool.centroid) v /= static_cast<double>(sample.size());
  for (std::size_t c = 0; c < center_count; ++c) {
    std::vector<double> p(centers.begin() + c * d, centers.begin() + (c + 1) * d);
    if (seen.insert(p).second) pool.points.push_back(std::move(p));
  }
  return pool;
}

}  // namespace

std::vector<std::vector<double>> extract_candidate_means(
    const Dataset& ds, const std::vector<std::uint32_t>& sample,
    const std::vector<double>& centers, std::size_t center_count,
    const PtasConfig& cfg, rng::Engine& eng) {
  cfg.validate();
  std::size_t d = ds.dim();
  CandidatePool pool = build_pool(ds, sample, centers, center_count);
  std::size_t psz = pool.points.size();
  if (psz == 0) return {};

  std::set<std::vector<double>> dedup;
  std::vector<std::vector<double>> out;
  auto emit = [&](const std::vector<double>& c) {
    if (out.size() >= cfg.max_extract) return;
    if (dedup.insert(c).second) out.push_back(c);
  };

  // candidate from one subset and one weight vector, averaged around the
  // subset member nearest the sample centroid
  auto candidate_of = [&](const std::vector<std::size_t>& subset,
                          const std::vector<double>& w) {
    double wsum = 0.0;
    for (double v : w) wsum += v;
    if (!(wsum > 0.0)) return;
    std::size_t anchor = subset[0];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s : subset) {
      double dd = kern::sqdist(pool.points[s].data(), pool.centroid.data(), d);
      if (dd < best) {
        best = dd;
        anchor = s;
      }
    }
    const std::vector<double>& a = pool.points[anchor];
    std::vector<double> c(d, 0.0);
    for (std::size_t t = 0; t < subset.size(); ++t) {
      const std::vector<double>& p = pool.points[subset[t]];
      for (std::size_t j = 0; j < d; ++j) c[j] += w[t] * (p[j] - a[j]);
    }
    for (std::size_t j = 0; j < d; ++j) c[j] = a[j] + c[j] / wsum;
    emit(c);
  };

  auto weights_for = [&](const std::vector<std::size_t>& subset) {
    std::size_t s = subset.size();
    candidate_of(subset, std::vector<double>(s, 1.0));  // plain average first
    if (s == 1) return;
    double combos = std::pow(static_cast<double>(cfg.weight_steps + 1),
                             static_cast<double>(s));
    if (combos - 1.0 <= static_cast<double>(cfg.weight_combo_cap) + 0.5) {
      // full grid, lexicographic
      std::vector<int> w(s, 0);
      while (true) {
        std::size_t j = 0;
        while (j < s && w[j] == cfg.weight_steps) w[j++] = 0;
        if (j == s) break;
        w[j]++;
        std::vector<double> wd(s);
        for (std::size_t t = 0; t < s; ++t) wd[t] = static_cast<double>(w[t]);
        candidate_of(subset, wd);
      }
    } else {
      for (std::size_t r = 0; r < cfg.weight_combo_cap; ++r) {
        std::vector<double> wd(s);
        for (std::size_t t = 0; t < s; ++t)
          wd[t] = static_cast<double>(rng::uniform_index(
              eng, static_cast<std::uint64_t>(cfg.weight_steps) + 1));
        candidate_of(subset, wd);
      }
    }
  };

  std::size_t max_s = std::min(cfg.caps.max_subset, psz);

  // enumerate when the subset space is small, otherwise singletons plus a
  // seeded draw of random subsets
  double subset_count = 0.0;
  {
    double c = 1.0;
    for (std::size_t s = 1; s <= max_s; ++s) {
      c = c * static_cast<double>(psz - s + 1) / static_cast<double>(s);
      subset_count += c;
    }
  }

  if (subset_count <= static_cast<double>(cfg.subset_budget)) {
    std::vector<std::size_t> subset;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                            std::size_t left) {
      if (out.size() >= cfg.max_extract) return;
      if (left == 0) {
        weights_for(subset);
        return;
      }
      for (std::size_t i = start; i + left <= psz; ++i) {
        subset.push_back(i);
        rec(i + 1, left - 1);
        subset.pop_back();
      }
    };
    for (std::size_t s = 1; s <= max_s && out.size() < cfg.max_extract; ++s)
      rec(0, s);
  } else {
    for (std::size_t i = 0; i < psz && out.size() < cfg.max_extract; ++i)
      candidate_of({i}, {1.0});
    for (std::size_t r = 0; r < cfg.subset_budget && out.size() < cfg.max_extract;
         ++r) {
      std::size_t s = 2 + rng::uniform_index(eng, max_s >= 2 ? max_s - 1 : 1);
      s = std::min(s, psz);
      // draw s distinct pool indices
      std::set<std::size_t> pick;
      while (pick.size() < s)
        pick.insert(rng::uniform_index(eng, psz));
      std::vector<std::size_t> subset(pick.begin(), pick.end());
      weights_for(subset);
    }
  }
  return out;
}

// ------------------------------------------------------------ candidate tree

namespace {

struct BeamNode {
  std::vector<double> centers;
  std::size_t count = 0;
  std::vector<CenterProvenance> prov;
  std::vector<std::uint64_t> branch;
  std::vector<double> mindist;
  double score = 0.0;
};

bool beam_less(const BeamNode& a, const BeamNode& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.branch < b.branch;
}

}  // namespace

std::vector<CandidateCenters> candidate_tree(const Dataset& ds, std::int32_t k,
                                             const PtasConfig& cfg,
                                             std::uint64_t tree_seed) {
  cfg.validate();
  if (k < 1) throw ConfigError("candidate_tree needs k >= 1");
  std::size_t n = ds.size(), d = ds.dim(), kk = static_cast<std::size_t>(k);

  auto seed_eng = rng::make_engine(tree_seed, {0x756e69});
  UniformSeedResult seeded = uniform_seed(ds, k, cfg, seed_eng);
  auto extract_eng = rng::make_engine(tree_seed, {0x757732});
  std::vector<std::vector<double>> first =
      extract_candidate_means(ds, seeded.sample, {}, 0, cfg, extract_eng);

  std::vector<BeamNode> beam;
  for (std::size_t ci = 0; ci < first.size(); ++ci) {
    BeamNode node;
    node.centers = first[ci];
    node.count = 1;
    node.prov = {CenterProvenance::UniformSeed};
    node.branch = {static_cast<std::uint64_t>(ci)};
    node.mindist.resize(n);
    kern::sqdist_batch(ds.data(), n, d, node.centers.data(), node.mindist.data());
    node.score = std::accumulate(node.mindist.begin(), node.mindist.end(), 0.0);
    beam.push_back(std::move(node));
  }
  std::sort(beam.begin(), beam.end(), beam_less);
  if (beam.size() > cfg.caps.max_leaves) beam.resize(cfg.caps.max_leaves);

  std::size_t sample_count = cfg.d2_sample_size(kk);

  // Expansion keeps at most max_leaves children alive at any moment: a
  // worst-on-top heap lets a better child evict the current worst instead of
  // materializing every (node, level, candidate) combination first.
  std::vector<double> scratch(n);
  for (std::size_t depth = 2; depth <= kk; ++depth) {
    std::vector<BeamNode> next;
    auto consider = [&](BeamNode&& child) {
      if (next.size() < cfg.caps.max_leaves) {
        next.push_back(std::move(child));
        std::push_heap(next.begin(), next.end(), beam_less);
      } else if (beam_less(child, next.front())) {
        std::pop_heap(next.begin(), next.end(), beam_less);
        next.back() = std::move(child);
        std::push_heap(next.begin(), next.end(), beam_less);
      }
    };
    for (const BeamNode& node : beam) {
      auto levels = d2_levels(ds, node.centers, node.count, cfg, k);
      // identical member sets sample identically; keep the first of each run
      std::vector<const PruneLevel*> distinct;
      for (const auto& lv : levels) {
        if (lv.degenerate) continue;
        if (!distinct.empty() && distinct.back()->members == lv.members) continue;
        distinct.push_back(&lv);
      }
      bool extended = false;
      for (const PruneLevel* lv : distinct) {
        std::uint64_t branch_hash = fold_ids(tree_seed, node.branch);
        auto eng = rng::make_engine(branch_hash, {0xd2d2, depth, lv->index});
        std::vector<std::uint32_t> sample = d2_sample(*lv, sample_count, eng);
        auto cands =
            extract_candidate_means(ds, sample, node.centers, node.count, cfg, eng);
        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
          double score = 0.0;
          for (std::size_t p = 0; p < n; ++p) {
            double dd = kern::sqdist(ds.row(p), cands[ci].data(), d);
            scratch[p] = std::min(node.mindist[p], dd);
            score += scratch[p];
          }
          extended = true;
          if (next.size() >= cfg.caps.max_leaves && next.front().score < score)
            continue;  // cannot displace anything; skip the copies
          BeamNode child;
          child.centers = node.centers;
          child.centers.insert(child.centers.end(), cands[ci].begin(), cands[ci].end());
          child.count = node.count + 1;
          child.prov = node.prov;
          child.prov.push_back(CenterProvenance::D2Extracted);
          child.branch = node.branch;
          child.branch.push_back(lv->index);
          child.branch.push_back(ci);
          child.mindist = scratch;
          child.score = score;
          consider(std::move(child));
        }
      }
      if (!extended) consider(BeamNode(node));  // carried through, padded later
    }
    std::sort(next.begin(), next.end(), beam_less);
    beam = std::move(next);
  }

  std::vector<CandidateCenters> leaves;
  leaves.reserve(beam.size());
  for (BeamNode& node : beam) {
    while (node.count < kk) {  // degenerate branch: repeat the first center
      node.centers.insert(node.centers.end(), node.centers.begin(),
                          node.centers.begin() + d);
      node.prov.push_back(node.prov.front());
      node.count++;
    }
    CandidateCenters cc;
    cc.centers = std::move(node.centers);
    cc.count = node.count;
    cc.provenance = std::move(node.prov);
    cc.branch_id = std::move(node.branch);
    cc.seeding_cost = node.score;
    leaves.push_back(std::move(cc));
  }
  return leaves;
}

// ------------------------------------------------------------- assignment

std::vector<OptGuess> opt_guess_grid(double low, double high, double epsilon) {
  if (!(low > 0.0) || high < low)
    throw ConfigError("opt_guess_grid needs 0 < low <= high");
  std::vector<OptGuess> out;
  double v = low;
  std::size_t i = 0;
  while (true) {
    out.push_back(OptGuess{v, i});
    if (v >= high) break;
    v *= 1.0 + epsilon;
    ++i;
  }
  return out;
}

std::optional<BucketAssignment> assign_by_buckets(const Dataset& ds,
                                                  const CandidateCenters& cand,
                                                  const OptGuess& guess,
                                                  const PtasConfig& cfg) {
  cfg.validate();
  std::size_t n = ds.size(), d = ds.dim(), k = cand.count;
  if (k == 0 || cand.centers.size() != k * d)
    throw MismatchError("assign_by_buckets: bad candidate centers");
  double eps = cfg.epsilon;
  double ohat = guess.value;
  if (!(ohat >= 0.0)) throw ConfigError("assign_by_buckets: guess must be >= 0");

  double base = eps / (static_cast<double>(n) * static_cast<double>(n)) * ohat;
  double serve_limit = (1.0 + eps) * ohat;
  double log1e = std::log1p(eps);

  // row-major dist[i*k + c]
  std::vector<double> dist(n * k);
  {
    std::vector<double> col(n);
    for (std::size_t c = 0; c < k; ++c) {
      kern::sqdist_batch(ds.data(), n, d, cand.centers.data() + c * d, col.data());
      for (std::size_t i = 0; i < n; ++i) dist[i * k + c] = col[i];
    }
  }

  // distance class of point i toward center c: 0 below base, geometric rungs
  // above, -1 when the point cannot be served by c at all
  std::vector<std::int32_t> klass(n * k);
  std::vector<double> rep(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    bool servable = false;
    for (std::size_t c = 0; c < k; ++c) {
      double dd = dist[i * k + c];
      std::int32_t j;
      if (dd > serve_limit) {
        j = -1;
      } else if (dd <= base) {
        j = 0;
      } else {
        double raw = std::ceil(std::log(dd / base) / log1e - 1e-12);
        j = static_cast<std::int32_t>(std::max(1.0, raw));
      }
      klass[i * k + c] = j;
      if (j > 0)
        rep[i * k + c] = std::min(base * std::pow(1.0 + eps, j), serve_limit);
      if (j >= 0) servable = true;
    }
    if (!servable) return std::nullopt;  // guess too small for this point
  }

  // bucket = identical class vector
  std::map<std::vector<std::int32_t>, std::vector<std::uint32_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int32_t> sig(klass.begin() + i * k, klass.begin() + (i + 1) * k);
    buckets[sig].push_back(static_cast<std::uint32_t>(i));
  }
  std::size_t b = buckets.size();
  std::vector<std::vector<std::uint32_t>> bucket_members;
  std::vector<std::vector<double>> bucket_rep;  // per bucket, per center
  bucket_members.reserve(b);
  for (auto& [sig, mem] : buckets) {
    std::vector<double> r(k, -1.0);
    std::uint32_t probe = mem.front();
    for (std::size_t c = 0; c < k; ++c)
      if (sig[c] >= 0) r[c] = rep[probe * k + c];
    bucket_members.push_back(std::move(mem));
    bucket_rep.push_back(std::move(r));
  }

  // cluster size grid: 0, 1 and ceilings of powers of 1+eps up to n
  std::vector<std::int64_t> grid{0, 1};
  for (double v = 1.0 + eps;; v *= 1.0 + eps) {
    std::int64_t g = guarded_ceil(v);
    if (g >= static_cast<std::int64_t>(n)) break;
    if (g > grid.back()) grid.push_back(g);
  }
  grid.push_back(static_cast<std::int64_t>(n));

  BucketAssignment best;
  bool have = false;

  // profile totals live in [n, (1+eps) n + k]: true sizes sum to n and each
  // is rounded up to the next grid point, a 1+eps factor plus a ceiling
  std::int64_t total_hi =
      guarded_ceil((1.0 + eps) * static_cast<double>(n)) + static_cast<std::int64_t>(k);

  std::vector<std::size_t> prof(k, 0);
  std::size_t tried = 0;
  bool capped = false;
  while (true) {
    std::int64_t total = 0;
    for (std::size_t c = 0; c < k; ++c) total += grid[prof[c]];
    if (total >= static_cast<std::int64_t>(n) && total <= total_hi) {
      if (++tried > cfg.profile_cap) {
        capped = true;
        break;
      }
      // transportation: buckets supply their members, centers take at most
      // their profile size, arc cost scales the class ceiling by the size
      FlowNetwork net;
      net.node_count = static_cast<std::int32_t>(1 + b + k + 1);
      net.source = 0;
      net.sink = static_cast<std::int32_t>(1 + b + k);
      net.required_flow = static_cast<std::int64_t>(n);
      for (std::size_t bi = 0; bi < b; ++bi)
        net.arcs.push_back(FlowArc{0, static_cast<std::int32_t>(1 + bi),
                                   static_cast<std::int64_t>(bucket_members[bi].size()),
                                   0, 0.0});
      std::vector<std::size_t> carry_arc(b * k, SIZE_MAX);
      for (std::size_t bi = 0; bi < b; ++bi)
        for (std::size_t c = 0; c < k; ++c) {
          if (bucket_rep[bi][c] < 0.0 || grid[prof[c]] == 0) continue;
          carry_arc[bi * k + c] = net.arcs.size();
          net.arcs.push_back(FlowArc{
              static_cast<std::int32_t>(1 + bi),
              static_cast<std::int32_t>(1 + b + c),
              std::min(static_cast<std::int64_t>(bucket_members[bi].size()),
                       grid[prof[c]]),
              0, static_cast<double>(grid[prof[c]]) * bucket_rep[bi][c]});
        }
      for (std::size_t c = 0; c < k; ++c)
        if (grid[prof[c]] > 0)
          net.arcs.push_back(FlowArc{static_cast<std::int32_t>(1 + b + c),
                                     net.sink, grid[prof[c]], 0, 0.0});

      FlowSolution sol = solve_min_cost_flow(net);
      if (sol.feasible) {
        // counts -> concrete labeling, members of each bucket spent in index
        // order against centers in index order
        std::vector<std::int32_t> labels(n, -1);
        std::vector<std::int64_t> assigned(k, 0);
        std::vector<double> exact_sum(k, 0.0), est_sum(k, 0.0);
        for (std::size_t bi = 0; bi < b; ++bi) {
          std::size_t at = 0;
          for (std::size_t c = 0; c < k; ++c) {
            std::size_t arc = carry_arc[bi * k + c];
            if (arc == SIZE_MAX) continue;
            std::int64_t h = sol.arc_flow[arc];
            for (std::int64_t t = 0; t < h; ++t) {
              std::uint32_t p = bucket_members[bi][at++];
              labels[p] = static_cast<std::int32_t>(c);
              exact_sum[c] += dist[p * k + c];
              est_sum[c] += bucket_rep[bi][c];
            }
            assigned[c] += h;
          }
        }
        double center_cost = 0.0, estimate = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          center_cost += static_cast<double>(assigned[c]) * exact_sum[c];
          estimate += static_cast<double>(assigned[c]) * est_sum[c];
        }
        if (!have || center_cost < best.center_cost) {
          have = true;
          best.labeling = Labeling{labels, static_cast<std::int32_t>(k)};
          best.center_cost = center_cost;
          best.estimate = estimate;
        }
      }
    }
    // odometer over the profile grid
    std::size_t c = 0;
    while (c < k && prof[c] == grid.size() - 1) prof[c++] = 0;
    if (c == k) break;
    prof[c]++;
  }

  if (!have) return std::nullopt;
  if (capped) best.flags.push_back("profile_grid_capped");
  return best;
}

// ---------------------------------------------------------------- pipeline

namespace {

Dataset subset_dataset(const Dataset& ds, const std::vector<std::uint32_t>& idx) {
  std::vector<double> coords;
  coords.reserve(idx.size() * ds.dim());
  for (std::uint32_t i : idx)
    coords.insert(coords.end(), ds.row(i), ds.row(i) + ds.dim());
  return Dataset(idx.size(), ds.dim(), std::move(coords));
}

void push_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

// compositions of k over c parts, every part >= 1
void compositions(std::size_t k, std::size_t c,
                  std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(c, 1);
  if (c > k) return;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t at,
                                                          std::size_t left) {
    if (at == c - 1) {
      cur[at] = left;
      out.push_back(cur);
      return;
    }
    for (std::size_t v = 1; v + (c - at - 1) <= left; ++v) {
      cur[at] = v;
      rec(at + 1, left - v);
    }
  };
  rec(0, k);
}

}  // namespace

PtasResult solve_ptas(const Dataset& ds, std::int32_t k, const PtasConfig& cfg) {
  cfg.validate();
  if (k < 1) throw ConfigError("solve_ptas needs k >= 1");
  std::size_t n = ds.size(), d = ds.dim(), kk = static_cast<std::size_t>(k);

  PtasResult res;
  res.uniform_sample_theoretical = cfg.uniform_sample_theoretical(kk);
  res.d2_sample_theoretical = cfg.d2_sample_theoretical(kk);

  if (cfg.exact_limit > 0 && n <= cfg.exact_limit) {
    ExactResult ex = brute_force_minsum(ds, k, std::max<std::size_t>(n, cfg.exact_limit));
    res.labeling = std::move(ex.labeling);
    res.report = make_cost_report(ds, res.labeling);
    push_flag(res.flags, "routed_exact");
    return res;
  }

  PreprocessResult pre = preprocess_partition(ds, k, cfg);
  res.kmeans_estimate = pre.kmeans_estimate;

  if (pre.kmeans_estimate <= 0.0) {
    // at most k distinct coordinate rows: group identical points, cost 0
    std::map<std::vector<double>, std::int32_t> ids;
    std::vector<std::int32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> key(ds.row(i), ds.row(i) + d);
      auto [it, fresh] = ids.try_emplace(key, static_cast<std::int32_t>(ids.size()));
      labels[i] = it->second;
    }
    res.labeling = Labeling{std::move(labels), k};
    res.report = make_cost_report(ds, res.labeling);
    push_flag(res.flags, "identical_points_shortcut");
    return res;
  }

  if (cfg.uniform_sample_theoretical(kk) > static_cast<double>(cfg.caps.max_sample))
    push_flag(res.flags, "uniform_sample_capped");
  if (kk >= 2 &&
      cfg.d2_sample_theoretical(kk) > static_cast<double>(cfg.caps.max_sample))
    push_flag(res.flags, "d2_sample_capped");

  // candidate sets per component split
  std::size_t c = pre.components.size();
  std::vector<CandidateCenters> leaves;

  if (c == 1) {
    leaves = candidate_tree(ds, k, cfg, cfg.seed);
  } else {
    std::vector<std::vector<std::size_t>> comps;
    compositions(kk, c, comps);
    if (comps.empty())
      throw InfeasibleError("solve_ptas: more far components than centers");
    std::size_t budget = std::max<std::size_t>(1, cfg.caps.max_leaves / comps.size());

    // cache per (component, center count)
    std::map<std::pair<std::size_t, std::size_t>, std::vector<CandidateCenters>> cache;
    auto tree_for = [&](std::size_t ci, std::size_t kc)
        -> const std::vector<CandidateCenters>& {
      auto key = std::make_pair(ci, kc);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      Dataset sub = subset_dataset(ds, pre.components[ci]);
      auto tr = candidate_tree(sub, static_cast<std::int32_t>(kc), cfg,
                               rng::splitmix(cfg.seed ^ (0x636f6d70 + ci)));
      return cache.emplace(key, std::move(tr)).first->second;
    };

    for (std::size_t gi = 0; gi < comps.size(); ++gi) {
      // best-first cross product of the per-component leaf lists
      std::vector<const std::vector<CandidateCenters>*> lists;
      bool any_empty = false;
      for (std::size_t ci = 0; ci < c; ++ci) {
        lists.push_back(&tree_for(ci, comps[gi][ci]));
        if (lists.back()->empty()) any_empty = true;
      }
      if (any_empty) continue;

      std::set<std::vector<std::size_t>> visited;
      auto cmp = [&](const std::vector<std::size_t>& a,
                     const std::vector<std::size_t>& b) {
        double sa = 0.0, sb = 0.0;
        for (std::size_t ci = 0; ci < c; ++ci) {
          sa += (*lists[ci])[a[ci]].seeding_cost;
          sb += (*lists[ci])[b[ci]].seeding_cost;
        }
        if (sa != sb) return sa > sb;  // min-heap via greater
        return a > b;
      };
      std::vector<std::vector<std::size_t>> heap;
      heap.emplace_back(c, 0);
      visited.insert(heap.front());
      std::size_t taken = 0;
      while (!heap.empty() && taken < budget) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        std::vector<std::size_t> cur = std::move(heap.back());
        heap.pop_back();

        CandidateCenters glob;
        glob.count = 0;
        glob.branch_id.push_back(gi);
        glob.seeding_cost = 0.0;
        for (std::size_t ci = 0; ci < c; ++ci) {
          const CandidateCenters& part = (*lists[ci])[cur[ci]];
          glob.centers.insert(glob.centers.end(), part.centers.begin(),
                              part.centers.end());
          glob.provenance.insert(glob.provenance.end(), part.provenance.begin(),
                                 part.provenance.end());
          glob.count += part.count;
          glob.branch_id.push_back(cur[ci]);
          glob.seeding_cost += part.seeding_cost;
        }
        leaves.push_back(std::move(glob));
        ++taken;

        for (std::size_t ci = 0; ci < c; ++ci) {
          std::vector<std::size_t> nxt = cur;
          if (nxt[ci] + 1 >= lists[ci]->size()) continue;
          nxt[ci]++;
          if (visited.insert(nxt).second) {
            heap.push_back(std::move(nxt));
            std::push_heap(heap.begin(), heap.end(), cmp);
          }
        }
      }
    }
    std::sort(leaves.begin(), leaves.end(),
              [](const CandidateCenters& a, const CandidateCenters& b) {
                if (a.seeding_cost != b.seeding_cost)
                  return a.seeding_cost < b.seeding_cost;
                return a.branch_id < b.branch_id;
              });
    if (leaves.size() > cfg.caps.max_leaves) leaves.resize(cfg.caps.max_leaves);
  }

  if (leaves.size() >= cfg.caps.max_leaves) push_flag(res.flags, "leaves_truncated");
  res.leaves = leaves.size();

  // deterministic evaluation order: branch id, then the guess grid
  std::sort(leaves.begin(), leaves.end(),
            [](const CandidateCenters& a, const CandidateCenters& b) {
              return a.branch_id < b.branch_id;
            });

  double t_hat = pre.kmeans_estimate;
  std::vector<OptGuess> guesses =
      opt_guess_grid(t_hat / 20.0, 20.0 * static_cast<double>(n) * t_hat, cfg.epsilon);
  res.guesses = guesses.size();

  bool have = false;
  double best_cost = std::numeric_limits<double>::infinity();
  Labeling best_lab;
  for (const CandidateCenters& leaf : leaves) {
    for (const OptGuess& g : guesses) {
      // the guess bracketing the true optimum is at most (1+eps) times it;
      // once some labeling costs X >= OPT, guesses beyond (1+eps) X are idle
      if (have && g.value > (1.0 + cfg.epsilon) * best_cost) break;
      auto r = assign_by_buckets(ds, leaf, g, cfg);
      res.assignments_tried++;
      if (!r) continue;
      for (const auto& f : r->flags) push_flag(res.flags, f);
      double cost = minsum_cost(ds, r->labeling);
      if (!have || cost < best_cost) {
        have = true;
        best_cost = cost;
        best_lab = std::move(r->labeling);
      }
    }
  }

  if (!have) {
    // no guess served every point; fall back to nearest-center assignment
    // from the best-seeded leaf
    const CandidateCenters* best_leaf = &leaves.front();
    for (const auto& lf : leaves)
      if (lf.seeding_cost < best_leaf->seeding_cost) best_leaf = &lf;
    std::vector<double> md(n);
    std::vector<std::int32_t> lab(n);
    kern::min_sqdist_batch(ds.data(), n, d, best_leaf->centers.data(),
                           best_leaf->count, md.data(), lab.data());
    best_lab = Labeling{std::move(lab), k};
    push_flag(res.flags, "assignment_fallback_nearest");
  }

  res.labeling = std::move(best_lab);
  res.report = make_cost_report(ds, res.labeling);
  return res;
}

}  // namespace minsum
