#include "minsum/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>

namespace minsum::kern {

namespace {

double sqdist_scalar(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double t = a[j] - b[j];
    acc += t * t;
  }
  return acc;
}

double sumsq_scalar(const double* a, std::size_t d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) acc += a[j] * a[j];
  return acc;
}

void sqdist_batch_scalar(const double* pts, std::size_t n, std::size_t d,
                         const double* q, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = sqdist_scalar(pts + i * d, q, d);
}

void min_sqdist_batch_scalar(const double* pts, std::size_t n, std::size_t d,
                             const double* centers, std::size_t k,
                             double* best, std::int32_t* arg) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = pts + i * d;
    double bd = std::numeric_limits<double>::infinity();
    std::int32_t ba = -1;
    for (std::size_t c = 0; c < k; ++c) {
      double dd = sqdist_scalar(p, centers + c * d, d);
      if (dd < bd) {
        bd = dd;
        ba = static_cast<std::int32_t>(c);
      }
    }
    best[i] = bd;
    if (arg) arg[i] = ba;
  }
}

const Ops kScalar = {
    "scalar", sqdist_scalar, sumsq_scalar, sqdist_batch_scalar,
    min_sqdist_batch_scalar,
};

const Ops& pick_active() {
  const char* force = std::getenv("MINSUM_KERNEL");
  if (force && std::strcmp(force, "scalar") == 0) return kScalar;
#if MINSUM_HAVE_AVX2
  if (avx2_available()) return avx2_ops();
#endif
  return kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

bool avx2_available() {
#if MINSUM_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& active() {
  static const Ops& ops = pick_active();
  return ops;
}

}  // namespace minsum::kern
