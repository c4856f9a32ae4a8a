#include "spca/attack.hpp"

#include <string>

#include <Eigen/Dense>

namespace spca {

void AttackState::observe(const Matrix& Z, const Matrix& S) {
  if (Z.rows() != S.rows() || Z.cols() != S.cols())
    throw shape_error("observe: share and iterate dimensions differ");
  if (!observed_Z.empty() && (Z.rows() != observed_Z.front().rows() ||
                              Z.cols() != observed_Z.front().cols()))
    throw shape_error("observe: dimensions changed between rounds");
  observed_Z.push_back(Z);
  observed_S.push_back(S);
  ++k;
}

namespace {

Matrix stack(const std::vector<Matrix>& blocks) {
  const Index n = blocks.front().rows();
  const Index p = blocks.front().cols();
  Matrix out(n, p * static_cast<Index>(blocks.size()));
  for (std::size_t j = 0; j < blocks.size(); ++j)
    out.middleCols(static_cast<Index>(j) * p, p) = blocks[j];
  return out;
}

}  // namespace

Matrix AttackState::stacked_Z() const { return stack(observed_Z); }
Matrix AttackState::stacked_S() const { return stack(observed_S); }

Matrix reconstruct(const AttackState& state) {
  if (state.k < 1)
    throw argument_error("reconstruct: needs at least one observed round");
  Matrix Zs = state.stacked_Z();
  Matrix Ss = state.stacked_S();
  Eigen::BDCSVD<Matrix> svd(Zs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  if (rank == 0) return Matrix::Zero(Zs.rows(), Zs.rows());
  // Y = Ss V Sigma^-1 U^T over the retained spectrum
  Matrix t = Ss * svd.matrixV().leftCols(rank);
  t.noalias() = t * sv.head(rank).cwiseInverse().asDiagonal();
  return t * svd.matrixU().leftCols(rank).transpose();
}

Matrix symmetrize(const Matrix& Y) { return 0.5 * (Y + Y.transpose()); }

std::vector<AttackCurvePoint> attack_curve(const std::vector<Matrix>& Z_history,
                                           const std::vector<Matrix>& S_history,
                                           const Matrix& target,
                                           int checkpoint_every) {
  if (Z_history.size() != S_history.size())
    throw shape_error("attack_curve: history lengths differ");
  if (checkpoint_every <= 0)
    throw argument_error("attack_curve: checkpoint interval must be positive");
  std::vector<AttackCurvePoint> curve;
  AttackState state;
  for (std::size_t j = 0; j < Z_history.size(); ++j) {
    state.observe(Z_history[j], S_history[j]);
    const bool last = j + 1 == Z_history.size();
    if (state.k % checkpoint_every != 0 && !last) continue;
    Matrix Y = reconstruct(state);
    AttackCurvePoint pt;
    pt.round = state.k;
    pt.error = (Y - target).norm();
    pt.error_symmetrized = (symmetrize(Y) - target).norm();
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace spca
