#pragma once

#include <utility>

#include "spca/problem.hpp"
#include "spca/stiefel.hpp"
#include "spca/types.hpp"

namespace spca {

// Per-agent state.  The symmetric multiplier Lambda = X W^T + W X^T is never
// stored; every use routes through the n x p factor W.  cached_AAtX holds
// A_i A_i^T X from the latest multiplier update and is what makes the next
// local step cheap.
struct AgentState {
  StiefelPoint X;
  Matrix W;
  double beta = 0.0;
  Matrix cached_AAtX;
};

// Recomputes cached_AAtX and W = -(I - X X^T) A_i A_i^T X at the current X.
void update_multiplier(AgentState& agent, const DataShard& shard);

// X = Z0, beta as given, multiplier factor initialized at Z0.
AgentState make_agent(const DataShard& shard, const StiefelPoint& Z0, double beta);

// Default penalty 0.1 (||A_i A_i^T Z0||_F + mu).
double default_beta(const DataShard& shard, const StiefelPoint& Z0, double mu);

// (A_i A_i^T + Lambda_i + beta Z Z^T) V without forming any n x n matrix.
Matrix apply_H(const AgentState& agent, const DataShard& shard,
               const StiefelPoint& Z, const Matrix& V);

// Local objective h_i(X) = -1/2 tr(X^T H_i X) for the operator above,
// with Lambda taken from `agent`.
double local_quadratic(const AgentState& agent, const DataShard& shard,
                       const StiefelPoint& Z, const StiefelPoint& X);

// One subspace-iteration step toward the dominant eigenspace of H_i:
//   X+ = polar_retract( A_i A_i^T X + W + beta Z (Z^T X) ),
// reusing cached_AAtX for the data term.  Throws singular_input_error when
// the pre-retraction matrix is rank deficient.
StiefelPoint ssi_step(const AgentState& agent, const DataShard& shard,
                      const StiefelPoint& Z_next);

// Diagnostic evaluation of the two local sufficient-decrease inequalities
// (function-value decrease, KKT-violation contraction) between consecutive
// states at the same outer iteration.  Never gates the run.
std::pair<bool, bool> check_decrease_conditions(const AgentState& before,
                                                const AgentState& after,
                                                const DataShard& shard,
                                                const StiefelPoint& Z_next,
                                                double c, double c_prime,
                                                double delta);

// ||A_i||_2^2 by power iteration on v -> A_i (A_i^T v); deterministic.
double shard_spectral_norm_sq(const DataShard& shard);

}  // namespace spca
