#include "spca/dssal1.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spca/kernels.hpp"

namespace spca {

Matrix masked_local_product(const AgentState& agent, const StiefelPoint& Z) {
  if (Z.n() != agent.X.n() || Z.p() != agent.X.p())
    throw shape_error("masked_local_product: Z/agent dimension mismatch");
  Matrix xtz = agent.X.data.transpose() * Z.data;
  Matrix out = agent.X.data * (agent.W.transpose() * Z.data);
  out.noalias() += agent.W * xtz;
  out.noalias() -= agent.beta * (agent.X.data * xtz);
  if (testhooks::flip_masked_product_sign) out = -out;
  return out;
}

double feasible_mask_identity_check(const std::vector<AgentState>& agents,
                                    const std::vector<DataShard>& shards,
                                    const StiefelPoint& Z) {
  if (agents.size() != shards.size())
    throw shape_error("feasible_mask_identity_check: agent/shard count mismatch");
  Matrix sum = Matrix::Zero(Z.n(), Z.p());
  double beta_sum = 0.0;
  Matrix aatz = Matrix::Zero(Z.n(), Z.p());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    sum += masked_local_product(agents[i], Z);
    aatz += local_grad_product(shards[i], Z.data);
    beta_sum += agents[i].beta;
  }
  Matrix expected = -(aatz - Z.data * (Z.data.transpose() * aatz)) - beta_sum * Z.data;
  return (sum - expected).norm();
}

double epsilon_stationarity(const std::vector<AgentState>& agents,
                            const StiefelPoint& Z, const Matrix& D) {
  double acc = 0.0;
  for (const auto& a : agents) acc += projection_distance_sq(a.X, Z);
  acc /= static_cast<double>(agents.size());
  return acc + kernels::sum_squares(D.data(), static_cast<std::size_t>(D.size()));
}

double splitting_lagrangian(const std::vector<AgentState>& agents,
                            const StiefelPoint& Z, double mu) {
  double total = mu * kernels::l1_norm(Z.data.data(),
                                       static_cast<std::size_t>(Z.data.size()));
  const double p = static_cast<double>(Z.p());
  for (const auto& a : agents) {
    const double data_term = -0.5 * (a.X.data.array() * a.cached_AAtX.array()).sum();
    Matrix ztx = Z.data.transpose() * a.X.data;
    Matrix ztw = Z.data.transpose() * a.W;
    // <Lambda, X X^T> = 2 tr(W^T X), <Lambda, Z Z^T> = 2 <Z^T X, Z^T W>
    const double lam_xx = 2.0 * (a.W.array() * a.X.data.array()).sum();
    const double lam_zz = 2.0 * (ztx.array() * ztw.array()).sum();
    const double dist_sq = std::max(0.0, 2.0 * p - 2.0 * ztx.squaredNorm());
    total += data_term - 0.5 * (lam_xx - lam_zz) + 0.25 * a.beta * dist_sq;
  }
  return total;
}

double condition2_beta_lower_bound(const SpcaProblem& prob, int agent,
                                   const TheoryConstants& tc) {
  if (agent < 0 || agent >= prob.d())
    throw argument_error("condition2_beta_lower_bound: bad agent index");
  const double d = static_cast<double>(prob.d());
  const double p = static_cast<double>(prob.p);
  const double n = static_cast<double>(prob.n());
  const double sig = tc.sigma_lower;
  const double delta = sig / (4.0 * std::sqrt(tc.rho * d));
  const double a2 =
      shard_spectral_norm_sq(prob.shards[static_cast<std::size_t>(agent)]);
  const double ai_fro_sq =
      prob.shards[static_cast<std::size_t>(agent)].samples.squaredNorm();
  double a_fro_sq = 0.0;
  for (const auto& s : prob.shards) a_fro_sq += s.samples.squaredNorm();

  const double xi = std::max(
      {tc.c_prime, 4.0 * std::sqrt(2.0) / sig,
       4.0 * (2.0 * std::sqrt(tc.rho * d) + std::sqrt(2.0)) /
           (sig - 2.0 * std::sqrt(tc.rho * d) * delta),
       4.0 * (std::sqrt(2.0 * tc.rho * d) + 1.0) / (tc.c * sig * sig * tc.rho * d)});
  return std::max({xi * a2,
                   8.0 * (prob.mu * n * p + std::sqrt(p) * a_fro_sq) /
                       (1.0 - sig * sig),
                   6.0 * std::sqrt(p) * ai_fro_sq /
                       (tc.c * sig * sig * (1.0 - sig * sig))});
}

double condition1_eta_upper_bound(const SpcaProblem& prob,
                                  const std::vector<double>& betas,
                                  const TheoryConstants&) {
  const double n = static_cast<double>(prob.n());
  const double p = static_cast<double>(prob.p);
  double a_fro_sq = 0.0;
  for (const auto& s : prob.shards) a_fro_sq += s.samples.squaredNorm();
  double beta_sum = 0.0;
  for (double b : betas) beta_sum += b;
  const double mbar = 0.5 * prob.mu * std::sqrt(n * p) + 2.0 * a_fro_sq +
                      std::sqrt(p) * beta_sum;
  return 1.0 / (2.0 * mbar);
}

RunResult dssal1_run(const SpcaProblem& prob, Network& net, const DriverConfig& cfg,
                     const StiefelPoint& Z0, const ShareObserver& observer) {
  const int d = prob.d();
  if (net.agent_count() != d)
    throw protocol_error("dssal1_run: network has " +
                         std::to_string(net.agent_count()) + " agents, problem has " +
                         std::to_string(d));
  if (Z0.n() != prob.n() || Z0.p() != prob.p)
    throw shape_error("dssal1_run: initial point dimension mismatch");
  if (!cfg.beta_overrides.empty() &&
      cfg.beta_overrides.size() != static_cast<std::size_t>(d))
    throw argument_error("dssal1_run: beta override count != agent count");

  std::vector<AgentState> agents;
  agents.reserve(static_cast<std::size_t>(d));
  double beta_sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto& shard = prob.shards[static_cast<std::size_t>(i)];
    const double beta = cfg.beta_overrides.empty()
                            ? default_beta(shard, Z0, prob.mu)
                            : cfg.beta_overrides[static_cast<std::size_t>(i)];
    agents.push_back(make_agent(shard, Z0, beta));
    beta_sum += beta;
  }

  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / beta_sum;
  const double eps_g =
      cfg.eps_g > 0.0
          ? cfg.eps_g
          : 1e-8 * static_cast<double>(prob.n()) * static_cast<double>(prob.p);

  RunResult out;
  out.Z = Z0;
  double prev_step_norm = std::numeric_limits<double>::infinity();
  Matrix upsilon_ws;  // carried across outer iterations

  std::vector<Matrix> shares(static_cast<std::size_t>(d));
  for (long k = 0; k < cfg.max_iter; ++k) {
    for (int i = 0; i < d; ++i)
      shares[static_cast<std::size_t>(i)] =
          masked_local_product(agents[static_cast<std::size_t>(i)], out.Z);
    if (observer) observer(k, out.Z, shares);
    Matrix G = net.all_reduce_sum(shares);

    SubproblemInput sub{out.Z.data, std::move(G), eta, prob.mu};
    auto res = solve_subproblem(sub, SubproblemStop{prev_step_norm, 10},
                                upsilon_ws.size() ? &upsilon_ws : nullptr);
    Matrix D = res.step.data;
    double step_norm = D.norm();

    double consensus = 0.0;
    for (const auto& a : agents) consensus += projection_distance(a.X, out.Z);
    consensus /= static_cast<double>(d);

    IterationRecord rec;
    rec.k = k;
    rec.rounds = net.rounds();
    rec.bytes = net.bytes();

    if (consensus <= cfg.eps_c && step_norm <= eps_g) {
      rec.consensus = consensus;
      rec.step_norm = step_norm;
      rec.objective = objective(prob, out.Z);
      rec.lagrangian = splitting_lagrangian(agents, out.Z, prob.mu);
      out.eps_stationarity_trace.push_back(epsilon_stationarity(agents, out.Z, D));
      out.records.push_back(rec);
      out.converged = true;
      out.agents = std::move(agents);
      return out;
    }

    StiefelPoint Z_next;
    try {
      Z_next = polar_retract(out.Z.data + D);
    } catch (const singular_input_error&) {
      // On degenerate instances the single inner iteration allowed at k = 0
      // can emit a step so far from the tangent space that Z + D loses rank.
      // Re-solving the same subproblem to tangency restores full rank
      // (sigma_min(Z + D) >= 1 for tangent D); nondegenerate runs never take
      // this path.
      res = solve_subproblem_diagnostic(sub);
      D = res.step.data;
      step_norm = D.norm();
      Z_next = polar_retract(out.Z.data + D);
    }
    upsilon_ws = std::move(res.Upsilon);
    rec.consensus = consensus;
    rec.step_norm = step_norm;
    out.eps_stationarity_trace.push_back(epsilon_stationarity(agents, out.Z, D));
    for (int i = 0; i < d; ++i) {
      auto& agent = agents[static_cast<std::size_t>(i)];
      const auto& shard = prob.shards[static_cast<std::size_t>(i)];
      agent.X = ssi_step(agent, shard, Z_next);
      update_multiplier(agent, shard);
    }

    rec.objective = objective(prob, Z_next);
    rec.lagrangian = splitting_lagrangian(agents, Z_next, prob.mu);
    if (!std::isfinite(rec.objective))
      throw run_error("dssal1_run: non-finite objective at iteration " +
                          std::to_string(k),
                      out.Z.data);
    out.records.push_back(rec);
    out.Z = std::move(Z_next);
    prev_step_norm = step_norm;
  }

  out.converged = false;
  out.agents = std::move(agents);
  return out;
}

}  // namespace spca
