#include <immintrin.h>

#include <limits>

#include "minsum/kernels.hpp"

// AVX2 + FMA variants.  This translation unit is the only one compiled with
// -mavx2 -mfma; callers reach it through the dispatch table after the cpuid
// check in avx2_available().
namespace minsum::kern {

namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double sqdist_avx2(const double* a, const double* b, std::size_t d) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= d; j += 4) {
    __m256d va = _mm256_loadu_pd(a + j);
    __m256d vb = _mm256_loadu_pd(b + j);
    __m256d t = _mm256_sub_pd(va, vb);
    acc = _mm256_fmadd_pd(t, t, acc);
  }
  double tail = 0.0;
  for (; j < d; ++j) {
    double t = a[j] - b[j];
    tail += t * t;
  }
  return hsum256(acc) + tail;
}

double sumsq_avx2(const double* a, std::size_t d) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= d; j += 4) {
    __m256d va = _mm256_loadu_pd(a + j);
    acc = _mm256_fmadd_pd(va, va, acc);
  }
  double tail = 0.0;
  for (; j < d; ++j) tail += a[j] * a[j];
  return hsum256(acc) + tail;
}

void sqdist_batch_avx2(const double* pts, std::size_t n, std::size_t d,
                       const double* q, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = sqdist_avx2(pts + i * d, q, d);
}

void min_sqdist_batch_avx2(const double* pts, std::size_t n, std::size_t d,
                           const double* centers, std::size_t k,
                           double* best, std::int32_t* arg) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = pts + i * d;
    double bd = std::numeric_limits<double>::infinity();
    std::int32_t ba = -1;
    for (std::size_t c = 0; c < k; ++c) {
      double dd = sqdist_avx2(p, centers + c * d, d);
      if (dd < bd) {
        bd = dd;
        ba = static_cast<std::int32_t>(c);
      }
    }
    best[i] = bd;
    if (arg) arg[i] = ba;
  }
}

const Ops kAvx2 = {
    "avx2", sqdist_avx2, sumsq_avx2, sqdist_batch_avx2, min_sqdist_batch_avx2,
};

}  // namespace

const Ops& avx2_ops() { return kAvx2; }

}  // namespace minsum::kern
