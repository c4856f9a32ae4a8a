#include "spca/datagen.hpp"

#include <cmath>
#include <string>

#include "spca/rng.hpp"
#include "spca/stiefel.hpp"

namespace spca {

Matrix generate_raw(const GenSpec& spec) {
  if (spec.n <= 0 || spec.m <= 0)
    throw argument_error("generate: n and m must be positive");
  if (spec.n > spec.m)
    throw argument_error("generate: economy SVD shape needs n <= m (n=" +
                         std::to_string(spec.n) + ", m=" + std::to_string(spec.m) +
                         ")");
  if (!(spec.xi >= 1.0))
    throw argument_error("generate: xi must be >= 1");
  Rng u_rng(Rng::derive(spec.seed, 0));
  Rng v_rng(Rng::derive(spec.seed, 1));
  Matrix U = orthonormalize(u_rng.uniform_pm1_matrix(spec.n, spec.n));
  Matrix V = orthonormalize(v_rng.uniform_pm1_matrix(spec.m, spec.n));
  Vector sigma(spec.n);
  for (Index i = 0; i < spec.n; ++i)
    sigma(i) = std::pow(spec.xi, -static_cast<double>(i));  // xi^(1-i), 1-based i
  return (U * sigma.asDiagonal()) * V.transpose();
}

SpcaProblem generate(const GenSpec& spec) {
  if (spec.d <= 0) throw argument_error("generate: d must be positive");
  if (spec.p <= 0 || spec.p > spec.n)
    throw argument_error("generate: need 0 < p <= n");
  Matrix A = preprocess(generate_raw(spec));
  return make_problem(shard_columns(A, spec.d), spec.p, spec.mu);
}

}  // namespace spca
