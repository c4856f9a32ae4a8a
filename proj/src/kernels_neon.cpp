// NEON variants of the entrywise kernels (aarch64 only, where NEON is
// baseline).

#include <arm_neon.h>

#include <cmath>

#include "spca/kernels.hpp"

namespace spca::kernels::detail {

void soft_threshold_neon(const double* x, double* y, std::size_t len, double t) {
  const float64x2_t vt = vdupq_n_f64(t);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const uint64x2_t sign_bit = vdupq_n_u64(0x8000000000000000ULL);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    float64x2_t shr = vmaxq_f64(vsubq_f64(vabsq_f64(v), vt), zero);
    // copy the sign of v onto the shrunk magnitude
    float64x2_t res = vbslq_f64(sign_bit, v, shr);
    vst1q_f64(y + i, res);
  }
  for (; i < len; ++i) {
    double a = std::fabs(x[i]) - t;
    a = (a > 0.0) ? a : 0.0;
    y[i] = std::copysign(a, x[i]);
  }
}

double l1_norm_neon(const double* x, std::size_t len) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < len; ++i) total += std::fabs(x[i]);
  return total;
}

double sum_squares_neon(const double* x, std::size_t len) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < len; ++i) total += x[i] * x[i];
  return total;
}

std::size_t count_below_neon(const double* x, std::size_t len, double thresh) {
  const float64x2_t vth = vdupq_n_f64(thresh);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    float64x2_t mag = vabsq_f64(vld1q_f64(x + i));
    uint64x2_t lt = vcltq_f64(mag, vth);
    c += (vgetq_lane_u64(lt, 0) & 1u) + (vgetq_lane_u64(lt, 1) & 1u);
  }
  for (; i < len; ++i)
    if (std::fabs(x[i]) < thresh) ++c;
  return c;
}

}  // namespace spca::kernels::detail
