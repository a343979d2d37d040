#include "minsum/instances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "minsum/rng.hpp"

namespace minsum {

PlantedInstance gen_gaussian(const GaussianSpec& spec) {
  if (spec.k < 1 || spec.n < static_cast<std::size_t>(spec.k))
    throw ConfigError("gen_gaussian needs n >= k >= 1");
  std::size_t n = spec.n, d = spec.d, k = static_cast<std::size_t>(spec.k);

  // centers on the first axis, spacing = separation
  std::vector<double> centers(k * d, 0.0);
  for (std::size_t c = 0; c < k; ++c)
    centers[c * d] = spec.separation * static_cast<double>(c);

  std::vector<std::size_t> sizes(k, n / k);
  for (std::size_t c = 0; c < n % k; ++c) sizes[c]++;

  auto eng = rng::make_engine(spec.seed, {0x67617573});
  std::vector<double> coords;
  coords.reserve(n * d);
  std::vector<std::int32_t> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      for (std::size_t j = 0; j < d; ++j)
        coords.push_back(centers[c * d + j] + spec.sigma * rng::normal(eng));
      labels.push_back(static_cast<std::int32_t>(c));
    }

  return PlantedInstance{Dataset(n, d, std::move(coords)),
                         Labeling{std::move(labels), spec.k}};
}

namespace {

// vertical-line split with the smallest 2-means objective; returns labels
// (0 = left of the cut) or all-zero when every split leaves a side empty
std::vector<std::int32_t> best_vertical_split(const Dataset& ds) {
  std::size_t n = ds.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ds.row(a)[0] < ds.row(b)[0];
  });

  // prefix sums over points sorted by x, both coordinates
  std::vector<double> px(n + 1, 0.0), py(n + 1, 0.0), pq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = ds.row(order[i]);
    px[i + 1] = px[i] + p[0];
    py[i + 1] = py[i] + p[1];
    pq[i + 1] = pq[i] + p[0] * p[0] + p[1] * p[1];
  }
  auto side_sse = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    double m = static_cast<double>(hi - lo);
    double sx = px[hi] - px[lo], sy = py[hi] - py[lo], sq = pq[hi] - pq[lo];
    return sq - (sx * sx + sy * sy) / m;
  };

  std::size_t best_cut = n / 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t cut = 1; cut < n; ++cut) {
    if (ds.row(order[cut - 1])[0] == ds.row(order[cut])[0]) continue;
    double c = side_sse(0, cut) + side_sse(cut, n);
    if (c < best) {
      best = c;
      best_cut = cut;
    }
  }
  std::vector<std::int32_t> labels(n, 0);
  for (std::size_t i = best_cut; i < n; ++i) labels[order[i]] = 1;
  return labels;
}

}  // namespace

RingsInstance gen_rings(const RingsSpec& spec) {
  if (spec.inner_count == 0 || spec.outer_count == 0)
    throw ConfigError("gen_rings needs points on both rings");
  if (!(spec.inner_radius > 0.0 && spec.outer_radius > spec.inner_radius))
    throw ConfigError("gen_rings needs 0 < inner_radius < outer_radius");
  std::size_t n = spec.inner_count + spec.outer_count;

  auto eng = rng::make_engine(spec.seed, {0x72696e67});
  std::vector<double> coords;
  coords.reserve(n * 2);
  std::vector<std::int32_t> ring;
  ring.reserve(n);
  double jit = spec.jitter * spec.inner_radius;

  auto emit_ring = [&](std::size_t count, double radius, std::int32_t label) {
    for (std::size_t t = 0; t < count; ++t) {
      double angle = 2.0 * M_PI * (static_cast<double>(t) + 0.5) /
                     static_cast<double>(count);
      double x = radius * std::cos(angle);
      double y = radius * std::sin(angle);
      if (jit > 0.0) {
        x += jit * rng::normal(eng);
        y += jit * rng::normal(eng);
      }
      coords.push_back(x);
      coords.push_back(y);
      ring.push_back(label);
    }
  };
  emit_ring(spec.inner_count, spec.inner_radius, 0);
  emit_ring(spec.outer_count, spec.outer_radius, 1);

  Dataset pts(n, 2, std::move(coords));
  std::vector<std::int32_t> half = best_vertical_split(pts);
  return RingsInstance{std::move(pts), Labeling{std::move(ring), 2},
                       Labeling{std::move(half), 2}};
}

Dataset gen_grid(std::size_t n, std::size_t d, double spacing) {
  if (n == 0 || d == 0) throw ConfigError("gen_grid needs n >= 1, d >= 1");
  // smallest lattice with side^d >= n
  std::size_t side = 1;
  while (std::pow(static_cast<double>(side + 1), static_cast<double>(d)) <
         static_cast<double>(n))
    ++side;
  ++side;

  std::vector<double> coords;
  coords.reserve(n * d);
  std::vector<std::size_t> pos(d, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      coords.push_back(spacing * static_cast<double>(pos[j]));
    for (std::size_t j = d; j-- > 0;) {
      if (++pos[j] < side) break;
      pos[j] = 0;
    }
  }
  return Dataset(n, d, std::move(coords));
}

void validate_set_system(const SetSystem& sys) {
  if (sys.universe == 0 || sys.set_size == 0)
    throw ConfigError("set system needs a universe and z >= 1");
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& s : sys.sets) {
    if (s.size() != sys.set_size)
      throw ConfigError("set system contains a set of the wrong size");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 1 || s[i] > sys.universe)
        throw ConfigError("set element outside the universe");
      if (i > 0 && s[i] <= s[i - 1])
        throw ConfigError("set elements must be sorted and distinct");
    }
    if (!seen.insert(s).second)
      throw DuplicateSetError("set system contains a duplicate set");
  }
}

Dataset set_system_points(const SetSystem& sys) {
  validate_set_system(sys);
  if (sys.sets.empty()) throw ConfigError("set system has no sets");
  std::size_t n = sys.sets.size(), d = sys.universe;
  std::vector<double> coords(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t e : sys.sets[i]) coords[i * d + (e - 1)] = 1.0;
  return Dataset(n, d, std::move(coords));
}

CoverSystemInstance gen_cover_system(const CoverSystemSpec& spec) {
  std::size_t z = spec.z, u = spec.universe;
  std::size_t k = static_cast<std::size_t>(spec.k);
  if (spec.k < 1 || z < 2) throw ConfigError("gen_cover_system needs k >= 1, z >= 2");
  if (k * (z - 1) > u)
    throw InfeasibleError("gen_cover_system: universe too small for disjoint cores");
  if (spec.sets_per_part > u - (z - 1))
    throw InfeasibleError("gen_cover_system: not enough extensions per core");

  auto eng = rng::make_engine(spec.seed, {0x6a6368});

  // disjoint cores from a shuffled universe
  std::vector<std::uint32_t> perm(u);
  for (std::size_t i = 0; i < u; ++i) perm[i] = static_cast<std::uint32_t>(i + 1);
  for (std::size_t i = u; i > 1; --i)
    std::swap(perm[i - 1], perm[rng::uniform_index(eng, i)]);

  CoverSystemInstance out;
  out.sets.universe = u;
  out.sets.set_size = z;
  std::size_t at = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::uint32_t> core(perm.begin() + at, perm.begin() + at + (z - 1));
    std::sort(core.begin(), core.end());
    out.part_cores.push_back(std::move(core));
    at += z - 1;
  }

  std::set<std::vector<std::uint32_t>> seen;
  for (std::size_t c = 0; c < k; ++c) {
    const auto& core = out.part_cores[c];
    // candidate extras: everything outside the core, shuffled
    std::vector<std::uint32_t> extras;
    for (std::uint32_t e = 1; e <= u; ++e)
      if (!std::binary_search(core.begin(), core.end(), e)) extras.push_back(e);
    for (std::size_t i = extras.size(); i > 1; --i)
      std::swap(extras[i - 1], extras[rng::uniform_index(eng, i)]);

    std::size_t made = 0;
    for (std::uint32_t e : extras) {
      if (made == spec.sets_per_part) break;
      std::vector<std::uint32_t> s = core;
      s.push_back(e);
      std::sort(s.begin(), s.end());
      if (!seen.insert(s).second) continue;  // collides with an earlier part
      out.sets.sets.push_back(std::move(s));
      out.truth.labels.push_back(static_cast<std::int32_t>(c));
      ++made;
    }
    if (made < spec.sets_per_part)
      throw InfeasibleError("gen_cover_system: could not place distinct sets");
  }
  out.truth.k = spec.k;
  validate_set_system(out.sets);
  return out;
}

SetSystem gen_random_sets(std::size_t universe, std::size_t z, std::size_t count,
                          std::uint64_t seed) {
  if (z > universe) throw ConfigError("gen_random_sets: z exceeds the universe");
  auto eng = rng::make_engine(seed, {0x736574});
  SetSystem sys;
  sys.universe = universe;
  sys.set_size = z;
  std::set<std::vector<std::uint32_t>> seen;
  std::size_t guard = 0;
  while (sys.sets.size() < count) {
    if (++guard > 1000 * count + 1000)
      throw InfeasibleError("gen_random_sets: universe exhausted");
    std::vector<std::uint32_t> pool(universe);
    for (std::size_t i = 0; i < universe; ++i)
      pool[i] = static_cast<std::uint32_t>(i + 1);
    for (std::size_t i = 0; i < z; ++i) {
      std::size_t j = i + rng::uniform_index(eng, universe - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::uint32_t> s(pool.begin(), pool.begin() + z);
    std::sort(s.begin(), s.end());
    if (seen.insert(s).second) sys.sets.push_back(std::move(s));
  }
  return sys;
}

std::optional<std::vector<std::vector<std::uint32_t>>> cover_search(
    const SetSystem& sys, std::int32_t k) {
  validate_set_system(sys);
  if (sys.universe > 12)
    throw TooLargeError("cover_search: exhaustive search limited to universe <= 12");
  if (k < 1) throw ConfigError("cover_search needs k >= 1");
  std::size_t z = sys.set_size;
  if (z < 2) throw ConfigError("cover_search needs z >= 2");

  // all (z-1)-subsets of the universe as bitmasks
  std::vector<std::uint32_t> cores;
  std::uint32_t full = (1u << sys.universe);
  for (std::uint32_t mask = 0; mask < full; ++mask)
    if (static_cast<std::size_t>(__builtin_popcount(mask)) == z - 1)
      cores.push_back(mask);

  std::vector<std::uint32_t> set_masks;
  for (const auto& s : sys.sets) {
    std::uint32_t m = 0;
    for (std::uint32_t e : s) m |= 1u << (e - 1);
    set_masks.push_back(m);
  }

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                          std::size_t left) {
    if (left == 0) {
      for (std::uint32_t sm : set_masks) {
        bool covered = false;
        for (std::size_t ci : chosen)
          if ((cores[ci] & ~sm) == 0) { covered = true; break; }
        if (!covered) return false;
      }
      best = chosen;
      return true;
    }
    for (std::size_t i = start; i + left <= cores.size(); ++i) {
      chosen.push_back(i);
      if (rec(i + 1, left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!rec(0, static_cast<std::size_t>(k))) return std::nullopt;

  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t ci : best) {
    std::vector<std::uint32_t> elems;
    for (std::size_t b = 0; b < sys.universe; ++b)
      if (cores[ci] & (1u << b)) elems.push_back(static_cast<std::uint32_t>(b + 1));
    out.push_back(std::move(elems));
  }
  return out;
}

Dataset jl_project(const Dataset& ds, double eps, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("jl_project needs eps in (0, 1)");
  std::size_t n = ds.size(), d = ds.dim();
  std::size_t target = static_cast<std::size_t>(std::ceil(
      8.0 * std::log(static_cast<double>(n)) / (eps * eps)));
  target = std::max<std::size_t>(1, target);

  auto eng = rng::make_engine(seed, {0x6a6c});
  double scale = 1.0 / std::sqrt(static_cast<double>(target));
  std::vector<double> proj(d * target);
  for (double& v : proj) v = scale * rng::normal(eng);

  std::vector<double> coords(n * target, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = ds.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      double pj = p[j];
      if (pj == 0.0) continue;
      const double* prow = proj.data() + j * target;
      double* orow = coords.data() + i * target;
      for (std::size_t t = 0; t < target; ++t) orow[t] += pj * prow[t];
    }
  }
  return Dataset(n, target, std::move(coords));
}

}  // namespace minsum
