#ifndef MINSUM_RNG_HPP
#define MINSUM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

// Seeded randomness helpers.  Distribution sampling is hand-rolled on top of
// raw mt19937_64 output because the std distributions are allowed to differ
// between standard library implementations, and reproducibility from a seed
// is part of the interface contract.
namespace minsum::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent engine from a master seed and a stream path, so
// subtasks (tree branches, bench runs) draw from disjoint streams no matter
// how much the siblings consume.
inline Engine make_engine(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> stream = {}) {
  std::uint64_t s = splitmix(seed);
  for (std::uint64_t part : stream) s = splitmix(s ^ splitmix(part));
  return Engine(s);
}

inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) via rejection.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw;
  do {
    draw = eng();
  } while (draw >= limit);
  return draw % n;
}

inline double normal(Engine& eng) {
  double u1 = uniform01(eng);
  double u2 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Index draw from a discrete distribution given cumulative weights
// (cum.back() = total mass, assumed > 0).
inline std::size_t sample_cumulative(const std::vector<double>& cum, Engine& eng) {
  double u = uniform01(eng) * cum.back();
  std::size_t lo = 0, hi = cum.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cum[mid] > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace minsum::rng

#endif  // MINSUM_RNG_HPP
