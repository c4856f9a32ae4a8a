#include "spca/local_update.hpp"

#include <cmath>
#include <string>

#include "spca/rng.hpp"

namespace spca {

void update_multiplier(AgentState& agent, const DataShard& shard) {
  agent.cached_AAtX = local_grad_product(shard, agent.X.data);
  agent.W = -(agent.cached_AAtX -
              agent.X.data * (agent.X.data.transpose() * agent.cached_AAtX));
}

AgentState make_agent(const DataShard& shard, const StiefelPoint& Z0, double beta) {
  if (!(beta > 0.0))
    throw argument_error("make_agent: beta must be positive, got " +
                         std::to_string(beta));
  AgentState agent;
  agent.X = Z0;
  agent.beta = beta;
  update_multiplier(agent, shard);
  return agent;
}

double default_beta(const DataShard& shard, const StiefelPoint& Z0, double mu) {
  return 0.1 * (local_grad_product(shard, Z0.data).norm() + mu);
}

Matrix apply_H(const AgentState& agent, const DataShard& shard,
               const StiefelPoint& Z, const Matrix& V) {
  if (V.rows() != agent.X.n() || V.cols() != agent.X.p())
    throw shape_error("apply_H: V is " + std::to_string(V.rows()) + "x" +
                      std::to_string(V.cols()));
  Matrix out = local_grad_product(shard, V);
  out.noalias() += agent.X.data * (agent.W.transpose() * V);
  out.noalias() += agent.W * (agent.X.data.transpose() * V);
  out.noalias() += agent.beta * (Z.data * (Z.data.transpose() * V));
  return out;
}

double local_quadratic(const AgentState& agent, const DataShard& shard,
                       const StiefelPoint& Z, const StiefelPoint& X) {
  return -0.5 * (X.data.array() * apply_H(agent, shard, Z, X.data).array()).sum();
}

StiefelPoint ssi_step(const AgentState& agent, const DataShard& shard,
                      const StiefelPoint& Z_next) {
  if (agent.cached_AAtX.rows() != agent.X.n() ||
      agent.cached_AAtX.cols() != agent.X.p())
    throw shape_error("ssi_step: cached data product has stale dimensions");
  (void)shard;
  Matrix C = agent.cached_AAtX + agent.W +
             agent.beta * (Z_next.data * (Z_next.data.transpose() * agent.X.data));
  try {
    return polar_retract(C);
  } catch (const singular_input_error& e) {
    throw singular_input_error(
        std::string("ssi_step: ") + e.what() + "; penalty beta=" +
        std::to_string(agent.beta) +
        " may be too small relative to the local/global alignment");
  }
}

std::pair<bool, bool> check_decrease_conditions(const AgentState& before,
                                                const AgentState& after,
                                                const DataShard& shard,
                                                const StiefelPoint& Z_next,
                                                double c, double c_prime,
                                                double delta) {
  // Everything is measured against H built from the *previous* multiplier.
  auto kkt_violation = [&](const StiefelPoint& X) {
    Matrix hx = apply_H(before, shard, Z_next, X.data);
    Matrix proj = hx - X.data * (X.data.transpose() * hx);
    return proj.norm();
  };
  const double h_before = local_quadratic(before, shard, Z_next, before.X);
  const double h_after = local_quadratic(before, shard, Z_next, after.X);
  const double viol_before = kkt_violation(before.X);
  const double viol_after = kkt_violation(after.X);

  const double denom = c_prime * shard_spectral_norm_sq(shard) + before.beta;
  const bool decrease_ok =
      h_before - h_after >= (c / denom) * viol_before * viol_before;
  const bool contraction_ok = viol_after <= delta * viol_before;
  return {decrease_ok, contraction_ok};
}

double shard_spectral_norm_sq(const DataShard& shard) {
  if (shard.samples.size() == 0 || shard.samples.isZero(0.0)) return 0.0;
  Rng rng(0xA11CEULL);
  Vector v = rng.uniform_pm1_matrix(shard.n(), 1);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    Vector w = shard.samples * (shard.samples.transpose() * v);
    const double norm = w.norm();
    if (!(norm > 0.0)) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (it > 10 && std::fabs(next - lambda) <= 1e-14 * std::fabs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace spca
