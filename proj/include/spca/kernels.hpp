#pragma once

#include <cstddef>

// Entrywise kernels used in the solver inner loops.  Each operation has a
// scalar reference implementation and, where the build architecture provides
// them, SIMD variants (AVX2 on x86-64, NEON on aarch64).  The variant is
// selected once at runtime; SPCA_KERNELS=scalar|avx2|neon overrides the
// choice.  Scalar and SIMD variants are equivalence-tested against each
// other: soft_threshold and count_below must agree bitwise, reductions up to
// reordering of the accumulation.

namespace spca::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
void set_active_isa(Isa isa);  // throws argument_error if unsupported here

// y[i] = x[i] - t if x[i] > t, x[i] + t if x[i] < -t, else 0.  y may alias x.
void soft_threshold(const double* x, double* y, std::size_t len, double t);

double l1_norm(const double* x, std::size_t len);

double sum_squares(const double* x, std::size_t len);

// Number of entries with |x[i]| < thresh (strict).
std::size_t count_below(const double* x, std::size_t len, double thresh);

namespace detail {

void soft_threshold_scalar(const double* x, double* y, std::size_t len, double t);
double l1_norm_scalar(const double* x, std::size_t len);
double sum_squares_scalar(const double* x, std::size_t len);
std::size_t count_below_scalar(const double* x, std::size_t len, double thresh);

#if defined(SPCA_BUILD_AVX2)
void soft_threshold_avx2(const double* x, double* y, std::size_t len, double t);
double l1_norm_avx2(const double* x, std::size_t len);
double sum_squares_avx2(const double* x, std::size_t len);
std::size_t count_below_avx2(const double* x, std::size_t len, double thresh);
#endif

#if defined(SPCA_BUILD_NEON)
void soft_threshold_neon(const double* x, double* y, std::size_t len, double t);
double l1_norm_neon(const double* x, std::size_t len);
double sum_squares_neon(const double* x, std::size_t len);
std::size_t count_below_neon(const double* x, std::size_t len, double thresh);
#endif

}  // namespace detail

}  // namespace spca::kernels
