#include "spca/stiefel.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spca/kernels.hpp"
#include "spca/rng.hpp"

namespace spca {

namespace {

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Flip column j of (and, when paired, its partner column) so that the
// largest-magnitude entry of the reference column is positive.  Ties take
// the first maximal index, which keeps the rule deterministic.
void fix_column_signs(Matrix& ref, Matrix* paired) {
  for (Index j = 0; j < ref.cols(); ++j) {
    Index imax = 0;
    double best = std::fabs(ref(0, j));
    for (Index i = 1; i < ref.rows(); ++i) {
      double a = std::fabs(ref(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (ref(imax, j) < 0.0) {
      ref.col(j) = -ref.col(j);
      if (paired) paired->col(j) = -paired->col(j);
    }
  }
}

}  // namespace

double StiefelPoint::orthonormality_defect() const {
  Matrix g = data.transpose() * data;
  g.diagonal().array() -= 1.0;
  return g.norm();
}

StiefelPoint StiefelPoint::from_orthonormal(Matrix m, double tol) {
  StiefelPoint z(std::move(m));
  if (z.p() > z.n())
    throw argument_error("StiefelPoint: p > n (" + dims(z.data) + ")");
  double defect = z.orthonormality_defect();
  if (!(defect <= tol * std::sqrt(static_cast<double>(z.p()))))
    throw argument_error("StiefelPoint: columns not orthonormal, defect " +
                         std::to_string(defect));
  return z;
}

double TangentVector::skew_defect() const {
  Matrix m = data.transpose() * base;
  Matrix s = m + m.transpose();
  return s.norm();
}

TangentVector tangent_project(const StiefelPoint& Z, const Matrix& Y) {
  if (Y.rows() != Z.n() || Y.cols() != Z.p())
    throw shape_error("tangent_project: Y is " + dims(Y) + ", expected " +
                      dims(Z.data));
  Matrix zty = Z.data.transpose() * Y;
  Matrix sym = 0.5 * (zty + zty.transpose());
  TangentVector d;
  d.data = Y - Z.data * sym;
  d.base = Z.data;
  return d;
}

StiefelPoint polar_retract(const Matrix& C) {
  if (C.rows() < C.cols())
    throw shape_error("polar_retract: input is " + dims(C) + ", needs rows >= cols");
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || smin <= smax * kRankTol)
    throw singular_input_error(
        "polar_retract: rank-deficient input (" + dims(C) + ", sigma_min/sigma_max = " +
        std::to_string(smax > 0.0 ? smin / smax : 0.0) + ")");
  Matrix U = svd.matrixU();
  Matrix V = svd.matrixV();
  fix_column_signs(V, &U);
  return StiefelPoint(U * V.transpose());
}

Matrix soft_threshold(const Matrix& X, double t) {
  if (!(t >= 0.0))
    throw argument_error("soft_threshold: t must be nonnegative, got " +
                         std::to_string(t));
  Matrix Y(X.rows(), X.cols());
  kernels::soft_threshold(X.data(), Y.data(),
                          static_cast<std::size_t>(X.size()), t);
  return Y;
}

double projection_distance_sq(const StiefelPoint& X, const StiefelPoint& Z) {
  if (X.n() != Z.n() || X.p() != Z.p())
    throw shape_error("projection_distance: " + dims(X.data) + " vs " + dims(Z.data));
  // 2p - 2||X^T Z||_F^2 rewritten as the residual 2||X - Z(Z^T X)||_F^2,
  // which stays accurate when the distance is near zero.
  Matrix residual = X.data - Z.data * (Z.data.transpose() * X.data);
  return 2.0 * residual.squaredNorm();
}

double projection_distance(const StiefelPoint& X, const StiefelPoint& Z) {
  return std::sqrt(projection_distance_sq(X, Z));
}

Matrix orthonormalize(const Matrix& M) {
  if (M.rows() < M.cols())
    throw shape_error("orthonormalize: input is " + dims(M) + ", needs rows >= cols");
  Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = qr.householderQ() * Matrix::Identity(M.rows(), M.cols());
  fix_column_signs(Q, nullptr);
  return Q;
}

StiefelPoint random_stiefel(Index n, Index p, std::uint64_t seed) {
  if (p > n)
    throw argument_error("random_stiefel: p > n (" + std::to_string(p) + " > " +
                         std::to_string(n) + ")");
  if (n <= 0 || p <= 0) throw argument_error("random_stiefel: n, p must be positive");
  Rng rng(seed);
  return StiefelPoint(orthonormalize(rng.uniform_pm1_matrix(n, p)));
}

}  // namespace spca
