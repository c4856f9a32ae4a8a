#pragma once

#include <utility>
#include <vector>

#include "spca/stiefel.hpp"
#include "spca/types.hpp"

namespace spca {

// One agent's slice of the data: n x m_i, columns are samples.
struct DataShard {
  Matrix samples;
  int agent_id = 0;

  Index n() const { return samples.rows(); }
  Index m() const { return samples.cols(); }
};

// min over the Stiefel manifold of
//   f(Z) + r(Z),  f(Z) = -1/2 sum_i ||A_i^T Z||_F^2,  r(Z) = mu ||Z||_1.
struct SpcaProblem {
  std::vector<DataShard> shards;
  Index p = 0;
  double mu = 0.0;

  Index n() const { return shards.front().n(); }
  Index m() const;
  int d() const { return static_cast<int>(shards.size()); }

  // Concatenated data matrix, in shard order.
  Matrix assemble() const;
};

// Validates shard consistency (shared n, p <= n, mu >= 0).
SpcaProblem make_problem(std::vector<DataShard> shards, Index p, double mu);

// Row-mean subtraction followed by row l2 normalization, applied to the
// assembled matrix before sharding.  Throws argument_error on a zero row.
Matrix preprocess(Matrix A);

// Contiguous column blocks; the first (m mod d) shards get one extra column.
std::vector<DataShard> shard_columns(const Matrix& A, int d);

// f(Z) + r(Z); A A^T is never formed, every product factors through the
// shards as A_i (A_i^T Z).
double objective(const SpcaProblem& prob, const StiefelPoint& Z);

// Smooth part f(Z) alone.
double objective_smooth(const SpcaProblem& prob, const StiefelPoint& Z);

// A_i A_i^T X via two thin products, cost O(n p m_i).
Matrix local_grad_product(const DataShard& shard, const Matrix& X);

// sum_i A_i A_i^T X.
Matrix grad_product(const SpcaProblem& prob, const Matrix& X);

// Matrix-element zero threshold shared by the sparsity measurement and the
// subgradient support classification.
inline constexpr double kZeroThreshold = 1e-5;

// Minimal-residual element of the l1 subdifferential mu * d||Z||_1 given the
// smooth gradient: entries with |z| > support_tol take mu*sign(z); the rest
// take the box value minimizing the tangent-projected residual
// ||P_T(smooth_grad + R)||_F (computed by an alternating per-entry clamp).
Matrix l1_subgradient_min_norm(const Matrix& Z, const Matrix& smooth_grad, double mu,
                               double support_tol = kZeroThreshold);

// First-order stationarity residual pair
//   ( ||(I - ZZ^T)(-A A^T Z + R)||_F , ||Z^T R - R^T Z||_F )
// with R the minimal-residual subgradient selection above.  Both components
// vanish exactly at a stationary point.
std::pair<double, double> stationarity_residual(const SpcaProblem& prob,
                                                const StiefelPoint& Z);

// Fraction of entries with |z| < threshold.
double sparsity(const StiefelPoint& Z, double threshold);

}  // namespace spca
