#include "spca/oracle.hpp"

#include <Eigen/Dense>

namespace spca::oracle {

Matrix dense_tangent_project(const Matrix& Z, const Matrix& Y) {
  const Index n = Z.rows();
  Matrix P = Matrix::Identity(n, n) - Z * Z.transpose();
  return P * Y + Z * (Z.transpose() * Y - Y.transpose() * Z) / 2.0;
}

Matrix dense_multiplier(const Matrix& X, const Matrix& A) {
  const Index n = X.rows();
  Matrix AAt = A * A.transpose();
  Matrix XXt = X * X.transpose();
  Matrix Pv = Matrix::Identity(n, n) - XXt;
  return -XXt * AAt * Pv - Pv * AAt * XXt;
}

Matrix dense_mask(const Matrix& X, const Matrix& W, double beta) {
  return X * W.transpose() + W * X.transpose() - beta * (X * X.transpose());
}

Matrix dense_local_operator(const Matrix& A, const Matrix& X, const Matrix& W,
                            double beta, const Matrix& Z) {
  return A * A.transpose() + X * W.transpose() + W * X.transpose() +
         beta * (Z * Z.transpose());
}

double dense_projection_distance(const Matrix& X, const Matrix& Z) {
  return (X * X.transpose() - Z * Z.transpose()).norm();
}

Matrix dominant_eigenspace(const Matrix& S, Index p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  // eigenvalues come out ascending
  return es.eigenvectors().rightCols(p).rowwise().reverse();
}

Matrix kkt_tangent_step(const Matrix& Z, const Matrix& G, double eta) {
  const Index n = Z.rows();
  const Index p = Z.cols();
  const Index nd = n * p;            // unknowns in D
  const Index ns = p * (p + 1) / 2;  // unknowns in the symmetric multiplier
  auto dvar = [&](Index i, Index j) { return j * n + i; };
  auto svar = [&](Index a, Index b) {
    if (a > b) std::swap(a, b);
    return nd + b * (b + 1) / 2 + a;
  };

  // Stationarity: D/eta - Z Y = -G  (np rows)
  // Constraint:   sym(D^T Z) = 0    (p(p+1)/2 rows)
  Matrix K = Matrix::Zero(nd + ns, nd + ns);
  Vector rhs = Vector::Zero(nd + ns);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index row = dvar(i, j);
      K(row, row) = 1.0 / eta;
      for (Index b = 0; b < p; ++b) K(row, svar(b, j)) -= Z(i, b);
      rhs(row) = -G(i, j);
    }
  }
  for (Index a = 0; a < p; ++a) {
    for (Index b = a; b < p; ++b) {
      const Index row = nd + b * (b + 1) / 2 + a;
      for (Index i = 0; i < n; ++i) {
        K(row, dvar(i, a)) += Z(i, b);
        K(row, dvar(i, b)) += Z(i, a);
      }
    }
  }
  Vector sol = K.fullPivLu().solve(rhs);
  Matrix D(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) D(i, j) = sol(dvar(i, j));
  return D;
}

Index numerical_rank(const Matrix& M, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  Index r = 0;
  while (r < s.size() && s(r) > rel_cutoff * s(0)) ++r;
  return r;
}

}  // namespace spca::oracle
