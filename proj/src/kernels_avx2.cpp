// AVX2 variants of the entrywise kernels.  This translation unit is compiled
// with -mavx2 -mfma and only ever called after a runtime cpuid check.

#include <immintrin.h>

#include <cmath>

#include "spca/kernels.hpp"

namespace spca::kernels::detail {

void soft_threshold_avx2(const double* x, double* y, std::size_t len, double t) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_andnot_pd(sign_bit, v);      // |v|
    __m256d shr = _mm256_max_pd(_mm256_sub_pd(mag, vt), zero);
    __m256d res = _mm256_or_pd(shr, _mm256_and_pd(sign_bit, v));
    _mm256_storeu_pd(y + i, res);
  }
  for (; i < len; ++i) {
    double a = std::fabs(x[i]) - t;
    a = (a > 0.0) ? a : 0.0;
    y[i] = std::copysign(a, x[i]);
  }
}

double l1_norm_avx2(const double* x, std::size_t len) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_bit, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) total += std::fabs(x[i]);
  return total;
}

double sum_squares_avx2(const double* x, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) total += x[i] * x[i];
  return total;
}

std::size_t count_below_avx2(const double* x, std::size_t len, double thresh) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d vth = _mm256_set1_pd(thresh);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_andnot_pd(sign_bit, v);
    __m256d lt = _mm256_cmp_pd(mag, vth, _CMP_LT_OQ);
    c += static_cast<std::size_t>(_mm_popcnt_u32(
        static_cast<unsigned>(_mm256_movemask_pd(lt))));
  }
  for (; i < len; ++i)
    if (std::fabs(x[i]) < thresh) ++c;
  return c;
}

}  // namespace spca::kernels::detail
