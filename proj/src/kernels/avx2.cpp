// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace rankmat::kernels::detail {

namespace {

inline double reduce_add_f64x4(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t k) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t d = 0;
  for (; d + 8 <= k; d += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + d), _mm256_loadu_pd(b + d), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + d + 4),
                           _mm256_loadu_pd(b + d + 4), acc1);
  }
  if (d + 4 <= k) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + d), _mm256_loadu_pd(b + d), acc0);
    d += 4;
  }
  double acc = reduce_add_f64x4(_mm256_add_pd(acc0, acc1));
  for (; d < k; ++d) acc += a[d] * b[d];
  return acc;
}

void pair_step_avx2(double* u, double* v, std::size_t k, double step) {
  const __m256d neg_step = _mm256_set1_pd(-step);
  std::size_t d = 0;
  for (; d + 4 <= k; d += 4) {
    const __m256d ud = _mm256_loadu_pd(u + d);
    const __m256d vd = _mm256_loadu_pd(v + d);
    _mm256_storeu_pd(u + d, _mm256_fmadd_pd(neg_step, vd, ud));
    _mm256_storeu_pd(v + d, _mm256_fmadd_pd(neg_step, ud, vd));
  }
  for (; d < k; ++d) {
    const double ud = u[d];
    const double vd = v[d];
    u[d] = ud - step * vd;
    v[d] = vd - step * ud;
  }
}

void row_dots_avx2(const double* rows, std::size_t row_count, std::size_t k,
                   const double* vec, double* out) {
  for (std::size_t r = 0; r < row_count; ++r)
    out[r] = dot_avx2(rows + r * k, vec, k);
}

}  // namespace rankmat::kernels::detail
