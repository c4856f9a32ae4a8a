#include "spca/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "spca/types.hpp"

namespace spca::kernels {

namespace detail {

void soft_threshold_scalar(const double* x, double* y, std::size_t len, double t) {
  for (std::size_t i = 0; i < len; ++i) {
    double a = std::fabs(x[i]) - t;
    a = (a > 0.0) ? a : 0.0;
    y[i] = std::copysign(a, x[i]);
  }
}

double l1_norm_scalar(const double* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += std::fabs(x[i]);
  return acc;
}

double sum_squares_scalar(const double* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i] * x[i];
  return acc;
}

std::size_t count_below_scalar(const double* x, std::size_t len, double thresh) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < len; ++i)
    if (std::fabs(x[i]) < thresh) ++c;
  return c;
}

}  // namespace detail

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SPCA_BUILD_AVX2) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Isa::neon:
#if defined(SPCA_BUILD_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "?";
}

namespace {

Isa pick_default() {
  if (const char* env = std::getenv("SPCA_KERNELS")) {
    std::string s(env);
    Isa want = Isa::scalar;
    if (s == "avx2")
      want = Isa::avx2;
    else if (s == "neon")
      want = Isa::neon;
    else if (s != "scalar")
      throw argument_error("SPCA_KERNELS: unknown value '" + s + "'");
    if (!isa_supported(want))
      throw argument_error(std::string("SPCA_KERNELS: '") + isa_name(want) +
                           "' not supported on this host");
    return want;
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa& active_slot() {
  static Isa isa = pick_default();
  return isa;
}

}  // namespace

Isa active_isa() { return active_slot(); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa))
    throw argument_error(std::string("kernel ISA '") + isa_name(isa) +
                         "' not supported on this host");
  active_slot() = isa;
}

void soft_threshold(const double* x, double* y, std::size_t len, double t) {
  switch (active_slot()) {
#if defined(SPCA_BUILD_AVX2)
    case Isa::avx2:
      return detail::soft_threshold_avx2(x, y, len, t);
#endif
#if defined(SPCA_BUILD_NEON)
    case Isa::neon:
      return detail::soft_threshold_neon(x, y, len, t);
#endif
    default:
      return detail::soft_threshold_scalar(x, y, len, t);
  }
}

double l1_norm(const double* x, std::size_t len) {
  switch (active_slot()) {
#if defined(SPCA_BUILD_AVX2)
    case Isa::avx2:
      return detail::l1_norm_avx2(x, len);
#endif
#if defined(SPCA_BUILD_NEON)
    case Isa::neon:
      return detail::l1_norm_neon(x, len);
#endif
    default:
      return detail::l1_norm_scalar(x, len);
  }
}

double sum_squares(const double* x, std::size_t len) {
  switch (active_slot()) {
#if defined(SPCA_BUILD_AVX2)
    case Isa::avx2:
      return detail::sum_squares_avx2(x, len);
#endif
#if defined(SPCA_BUILD_NEON)
    case Isa::neon:
      return detail::sum_squares_neon(x, len);
#endif
    default:
      return detail::sum_squares_scalar(x, len);
  }
}

std::size_t count_below(const double* x, std::size_t len, double thresh) {
  switch (active_slot()) {
#if defined(SPCA_BUILD_AVX2)
    case Isa::avx2:
      return detail::count_below_avx2(x, len, thresh);
#endif
#if defined(SPCA_BUILD_NEON)
    case Isa::neon:
      return detail::count_below_neon(x, len, thresh);
#endif
    default:
      return detail::count_below_scalar(x, len, thresh);
  }
}

}  // namespace spca::kernels
