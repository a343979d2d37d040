#ifndef MINSUM_KERNELS_HPP
#define MINSUM_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Distance kernels underneath every cost evaluation and sampling step.
// A scalar reference implementation always exists; on x86 with AVX2+FMA a
// vectorized variant is compiled in and selected at runtime.  Both variants
// are exposed so tests can check them against each other.
namespace minsum::kern {

struct Ops {
  const char* name;
  // squared euclidean distance between two d-vectors
  double (*sqdist)(const double* a, const double* b, std::size_t d);
  // squared norm of a d-vector
  double (*sumsq)(const double* a, std::size_t d);
  // out[i] = squared distance of row i of pts (n x d, row major) to q
  void (*sqdist_batch)(const double* pts, std::size_t n, std::size_t d,
                       const double* q, double* out);
  // per point: min squared distance to any of k centers (k x d, row major),
  // ties resolved toward the lowest center index; arg may be null
  void (*min_sqdist_batch)(const double* pts, std::size_t n, std::size_t d,
                           const double* centers, std::size_t k,
                           double* best, std::int32_t* arg);
};

const Ops& scalar_ops();

#if MINSUM_HAVE_AVX2
const Ops& avx2_ops();
#endif
bool avx2_available();

// Runtime-selected table.  MINSUM_KERNEL=scalar (env) forces the reference
// path regardless of CPU support.
const Ops& active();

inline double sqdist(const double* a, const double* b, std::size_t d) {
  return active().sqdist(a, b, d);
}
inline double sumsq(const double* a, std::size_t d) { return active().sumsq(a, d); }
inline void sqdist_batch(const double* pts, std::size_t n, std::size_t d,
                         const double* q, double* out) {
  active().sqdist_batch(pts, n, d, q, out);
}
inline void min_sqdist_batch(const double* pts, std::size_t n, std::size_t d,
                             const double* centers, std::size_t k,
                             double* best, std::int32_t* arg) {
  active().min_sqdist_batch(pts, n, d, centers, k, best, arg);
}

}  // namespace minsum::kern

#endif  // MINSUM_KERNELS_HPP
