#pragma once

#include <vector>

#include "spca/types.hpp"

namespace spca {

// Eavesdropper state: every observed round contributes p columns to two
// stacked systems, the public iterates Z^(j) and one target agent's shares
// S^(j).  If the shares were images of one fixed linear map M (S = M Z), the
// minimum-norm least-squares solution of Y [Z...] = [S...] recovers M as soon
// as the stacked iterates reach full row rank.
struct AttackState {
  std::vector<Matrix> observed_Z;
  std::vector<Matrix> observed_S;
  long k = 0;

  void observe(const Matrix& Z, const Matrix& S);

  // Columns appended in round order.
  Matrix stacked_Z() const;
  Matrix stacked_S() const;
};

// Minimum-norm least-squares solution Y = stacked_S * pinv(stacked_Z), with
// the pseudoinverse truncated at singular values below 1e-10 * sigma_max.
// Throws argument_error before the first observation.
Matrix reconstruct(const AttackState& state);

// (Y + Y^T) / 2; never worse than Y against a symmetric target.
Matrix symmetrize(const Matrix& Y);

struct AttackCurvePoint {
  long round = 0;  // rounds observed so far
  double error = 0.0;  // ||Y - target||_F
  double error_symmetrized = 0.0;
};

// Replays a recorded history, reconstructing every `checkpoint_every` rounds
// (and at the final round), and reports the reconstruction error against the
// target matrix.  The same pipeline serves both solvers: shares that are a
// fixed linear image of Z converge to the target, masked shares do not.
std::vector<AttackCurvePoint> attack_curve(const std::vector<Matrix>& Z_history,
                                           const std::vector<Matrix>& S_history,
                                           const Matrix& target,
                                           int checkpoint_every = 5);

}  // namespace spca
