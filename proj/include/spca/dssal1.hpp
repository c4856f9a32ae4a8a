#pragma once

#include <functional>
#include <vector>

#include "spca/local_update.hpp"
#include "spca/network.hpp"
#include "spca/problem.hpp"
#include "spca/stiefel.hpp"
#include "spca/types.hpp"
#include "spca/uzawa.hpp"

namespace spca {

struct DriverConfig {
  double eps_c = 1e-6;
  double eps_g = -1.0;  // < 0: use 1e-8 * n * p
  long max_iter = 50000;
  double eta = -1.0;  // < 0: use 1 / sum_i beta_i
  std::vector<double> beta_overrides;  // empty: per-agent defaults
};

struct IterationRecord {
  long k = 0;
  double objective = 0.0;
  double consensus = 0.0;  // mean projection distance over agents
  double step_norm = 0.0;  // ||D^(k)||_F
  long rounds = 0;
  long long bytes = 0;
  double lagrangian = 0.0;  // diagnostic
};

struct RunResult {
  StiefelPoint Z;
  std::vector<IterationRecord> records;
  bool converged = false;
  std::vector<AgentState> agents;
  // (1/d) sum_i ||Z Z^T - X_i X_i^T||_F^2 + ||D||_F^2, one value per iteration
  std::vector<double> eps_stationarity_trace;
};

// Called once per round with the iterate the shares were computed against and
// the per-agent public shares, before the all-reduce.
using ShareObserver =
    std::function<void(long k, const StiefelPoint& Z, const std::vector<Matrix>& shares)>;

// Q_i Z = X (W^T Z) + W (X^T Z) - beta X (X^T Z); the one matrix an agent
// publishes per round.  Never touches an n x n intermediate.
Matrix masked_local_product(const AgentState& agent, const StiefelPoint& Z);

// At a feasible point (all X_i X_i^T = Z Z^T, multipliers fresh) the
// aggregated masked product collapses to -(I - Z Z^T) A A^T Z - (sum beta) Z.
// Returns the Frobenius deviation from that closed form.
double feasible_mask_identity_check(const std::vector<AgentState>& agents,
                                    const std::vector<DataShard>& shards,
                                    const StiefelPoint& Z);

// (1/d) sum_i ||Z Z^T - X_i X_i^T||_F^2 + ||D||_F^2
double epsilon_stationarity(const std::vector<AgentState>& agents,
                            const StiefelPoint& Z, const Matrix& D);

// Augmented Lagrangian of the splitting model, evaluated through p x p Gram
// identities only.  Diagnostic; requires fresh multiplier caches.
double splitting_lagrangian(const std::vector<AgentState>& agents,
                            const StiefelPoint& Z, double mu);

// Outer loop: one all-reduce of masked products per iteration, tangent
// proximal step for Z, polar retraction, one local subspace-iteration step
// plus multiplier refresh per agent.  Stops when the consensus mean and the
// step norm are both below tolerance.
RunResult dssal1_run(const SpcaProblem& prob, Network& net, const DriverConfig& cfg,
                     const StiefelPoint& Z0, const ShareObserver& observer = {});

// Constants of the convergence theory's parameter conditions.  Purely
// diagnostic: the production path never evaluates them, and the practical
// penalty default sits far below the theoretical floor.
struct TheoryConstants {
  double rho = 1.0;          // penalty-ratio bound, beta_i <= rho beta_j
  double sigma_lower = 0.5;  // alignment floor for the local/global spans
  double c = 1.0;            // local decrease constant
  double c_prime = 1.0;      // local curvature constant
  // The contraction constant delta must stay below sigma_lower/(2 sqrt(rho d));
  // the diagnostic uses half of that ceiling.
};

// Theoretical lower bound on agent i's penalty parameter.
double condition2_beta_lower_bound(const SpcaProblem& prob, int agent,
                                   const TheoryConstants& tc = {});

// Theoretical ceiling 1/(2 Mbar) on the global step size, given the penalty
// parameters actually in use.
double condition1_eta_upper_bound(const SpcaProblem& prob,
                                  const std::vector<double>& betas,
                                  const TheoryConstants& tc = {});

namespace testhooks {
// Fault-injection switch used by the verify command's mutation check: negates
// the masked product so the oracle comparison must fail.  Never set in
// production paths.
inline bool flip_masked_product_sign = false;
}  // namespace testhooks

}  // namespace spca
