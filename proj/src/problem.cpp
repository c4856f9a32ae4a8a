#include "spca/problem.hpp"

#include <cmath>
#include <string>

#include "spca/kernels.hpp"

namespace spca {

Index SpcaProblem::m() const {
  Index total = 0;
  for (const auto& s : shards) total += s.m();
  return total;
}

Matrix SpcaProblem::assemble() const {
  Matrix A(n(), m());
  Index col = 0;
  for (const auto& s : shards) {
    A.middleCols(col, s.m()) = s.samples;
    col += s.m();
  }
  return A;
}

SpcaProblem make_problem(std::vector<DataShard> shards, Index p, double mu) {
  if (shards.empty()) throw argument_error("make_problem: no shards");
  const Index n = shards.front().n();
  for (const auto& s : shards)
    if (s.n() != n)
      throw shape_error("make_problem: shard " + std::to_string(s.agent_id) +
                        " has " + std::to_string(s.n()) + " rows, expected " +
                        std::to_string(n));
  if (p <= 0 || p > n) throw argument_error("make_problem: need 0 < p <= n");
  if (mu < 0.0) throw argument_error("make_problem: mu must be nonnegative");
  SpcaProblem prob;
  prob.shards = std::move(shards);
  prob.p = p;
  prob.mu = mu;
  return prob;
}

Matrix preprocess(Matrix A) {
  A.colwise() -= A.rowwise().mean();
  for (Index i = 0; i < A.rows(); ++i) {
    const double norm = A.row(i).norm();
    if (!(norm > 0.0))
      throw argument_error("preprocess: row " + std::to_string(i) +
                           " is zero after centering");
    A.row(i) /= norm;
  }
  return A;
}

std::vector<DataShard> shard_columns(const Matrix& A, int d) {
  if (d <= 0) throw argument_error("shard_columns: d must be positive");
  if (A.cols() < d)
    throw argument_error("shard_columns: fewer columns than shards");
  const Index base = A.cols() / d;
  const Index extra = A.cols() % d;
  std::vector<DataShard> shards;
  shards.reserve(static_cast<std::size_t>(d));
  Index col = 0;
  for (int i = 0; i < d; ++i) {
    const Index mi = base + (i < extra ? 1 : 0);
    shards.push_back(DataShard{A.middleCols(col, mi), i});
    col += mi;
  }
  return shards;
}

namespace {

void check_iterate(const SpcaProblem& prob, const StiefelPoint& Z) {
  if (Z.n() != prob.n() || Z.p() != prob.p)
    throw shape_error("iterate is " + std::to_string(Z.n()) + "x" +
                      std::to_string(Z.p()) + ", problem expects " +
                      std::to_string(prob.n()) + "x" + std::to_string(prob.p));
}

}  // namespace

double objective_smooth(const SpcaProblem& prob, const StiefelPoint& Z) {
  check_iterate(prob, Z);
  double f = 0.0;
  for (const auto& s : prob.shards)
    f -= 0.5 * (s.samples.transpose() * Z.data).squaredNorm();
  return f;
}

double objective(const SpcaProblem& prob, const StiefelPoint& Z) {
  const double l1 = kernels::l1_norm(Z.data.data(),
                                     static_cast<std::size_t>(Z.data.size()));
  return objective_smooth(prob, Z) + prob.mu * l1;
}

Matrix local_grad_product(const DataShard& shard, const Matrix& X) {
  if (X.rows() != shard.n())
    throw shape_error("local_grad_product: X has " + std::to_string(X.rows()) +
                      " rows, shard has " + std::to_string(shard.n()));
  return shard.samples * (shard.samples.transpose() * X);
}

Matrix grad_product(const SpcaProblem& prob, const Matrix& X) {
  Matrix acc = Matrix::Zero(X.rows(), X.cols());
  for (const auto& s : prob.shards) acc.noalias() += local_grad_product(s, X);
  return acc;
}

Matrix l1_subgradient_min_norm(const Matrix& Z, const Matrix& smooth_grad, double mu,
                               double support_tol) {
  // Entries on the support take mu*sign(z).  Entries below the support
  // tolerance (the retraction never produces exact zeros, so "zero" means
  // below the same 1e-5 threshold the sparsity measurement uses) are chosen
  // to minimize || P_T(smooth_grad + R) ||_F over the box [-mu, mu]:
  // alternate between the optimal normal-space component
  // N = Z sym(Z^T (G + R)) and the entrywise clamp of N - G onto the box.
  // Both half-steps minimize the same jointly convex quadratic, so the
  // iteration converges to the box optimum; at a stationary point the
  // projected residual this produces vanishes.
  auto on_support = [&](Index i, Index j) {
    return std::fabs(Z(i, j)) > support_tol;
  };
  Matrix R(Z.rows(), Z.cols());
  for (Index j = 0; j < Z.cols(); ++j) {
    for (Index i = 0; i < Z.rows(); ++i) {
      if (on_support(i, j)) {
        R(i, j) = mu * (Z(i, j) > 0.0 ? 1.0 : -1.0);
      } else {
        double r = -smooth_grad(i, j);
        if (r > mu) r = mu;
        if (r < -mu) r = -mu;
        R(i, j) = r;
      }
    }
  }
  if (mu == 0.0) return R;
  for (int sweep = 0; sweep < 500; ++sweep) {
    Matrix E = smooth_grad + R;
    Matrix zte = Z.transpose() * E;
    Matrix normal = Z * (0.5 * (zte + zte.transpose()));
    double change = 0.0;
    for (Index j = 0; j < Z.cols(); ++j) {
      for (Index i = 0; i < Z.rows(); ++i) {
        if (on_support(i, j)) continue;
        double r = normal(i, j) - smooth_grad(i, j);
        if (r > mu) r = mu;
        if (r < -mu) r = -mu;
        change = std::max(change, std::fabs(r - R(i, j)));
        R(i, j) = r;
      }
    }
    if (change <= 1e-14 * (1.0 + mu)) break;
  }
  return R;
}

std::pair<double, double> stationarity_residual(const SpcaProblem& prob,
                                                const StiefelPoint& Z) {
  check_iterate(prob, Z);
  Matrix grad = -grad_product(prob, Z.data);  // gradient of the smooth part
  Matrix R = l1_subgradient_min_norm(Z.data, grad, prob.mu);
  Matrix E = grad + R;
  Matrix normal_part = E - Z.data * (Z.data.transpose() * E);
  Matrix ztr = Z.data.transpose() * R;
  Matrix skew = ztr - ztr.transpose();
  return {normal_part.norm(), skew.norm()};
}

double sparsity(const StiefelPoint& Z, double threshold) {
  if (!(threshold >= 0.0))
    throw argument_error("sparsity: threshold must be nonnegative");
  const std::size_t zeros = kernels::count_below(
      Z.data.data(), static_cast<std::size_t>(Z.data.size()), threshold);
  return static_cast<double>(zeros) / static_cast<double>(Z.data.size());
}

}  // namespace spca
