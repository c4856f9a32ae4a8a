#include "spca/manpg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spca/rng.hpp"
#include "spca/uzawa.hpp"

namespace spca {

double spectral_norm_sq_estimate(const SpcaProblem& prob) {
  Rng rng(0xA11CEULL);
  Vector v = rng.uniform_pm1_matrix(prob.n(), 1);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    Vector w = grad_product(prob, v);
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

namespace {

double resolve_eta0(const SpcaProblem& prob, double eta0) {
  if (eta0 > 0.0) return eta0;
  const double lam = spectral_norm_sq_estimate(prob);
  return lam > 0.0 ? 1.0 / lam : 1.0;  // zero data: any finite step works
}

double resolve_eps_g(const SpcaProblem& prob, double eps_g) {
  return eps_g > 0.0 ? eps_g
                     : 1e-8 * static_cast<double>(prob.n()) *
                           static_cast<double>(prob.p);
}

std::vector<Matrix> local_shares(const SpcaProblem& prob, const StiefelPoint& Z) {
  std::vector<Matrix> shares;
  shares.reserve(prob.shards.size());
  for (const auto& s : prob.shards)
    shares.push_back(local_grad_product(s, Z.data));
  return shares;
}

}  // namespace

std::pair<StiefelPoint, std::vector<Matrix>> manpg_round(const SpcaProblem& prob,
                                                         Network& net,
                                                         const StiefelPoint& Z,
                                                         double eta, double mu) {
  auto shares = local_shares(prob, Z);
  Matrix S = net.all_reduce_sum(shares);
  SubproblemInput sub{Z.data, -S, eta, mu};
  auto res = solve_subproblem(sub, SubproblemStop{});
  StiefelPoint next = polar_retract(Z.data + res.step.data);
  return {std::move(next), std::move(shares)};
}

ManpgResult manpg_run(const SpcaProblem& prob, Network& net, const ManpgConfig& cfg,
                      const StiefelPoint& Z0, const ShareObserver& observer) {
  if (net.agent_count() != prob.d())
    throw protocol_error("manpg_run: network/problem agent count mismatch");
  if (Z0.n() != prob.n() || Z0.p() != prob.p)
    throw shape_error("manpg_run: initial point dimension mismatch");

  const double eta0 = resolve_eta0(prob, cfg.eta0);
  double eta = eta0;
  // Without a ceiling the adapted step keeps growing near stationarity
  // (every step is accepted there), the returned D scales with eta, and the
  // ||D||-based stopping rule becomes unreachable.
  const double eta_max = cfg.eta_max_factor * eta0;
  const double eps_g = resolve_eps_g(prob, cfg.eps_g);

  ManpgResult out;
  out.Z = Z0;
  double fbar = objective(prob, out.Z);
  double prev_step_norm = std::numeric_limits<double>::infinity();
  Matrix upsilon_ws;
  int consecutive_accepts = 0;

  for (long k = 0; k < cfg.max_iter; ++k) {
    // Each round starts from at least the reference step: rejections halve
    // eta inside a round while growth is only 1.05 per two accepted rounds,
    // so without the floor occasional rejections ratchet eta toward zero and
    // the adapted method ends up weaker than the fixed-step one.
    if (cfg.adapt) eta = std::min(std::max(eta, eta0), eta_max);
    auto shares = local_shares(prob, out.Z);
    if (observer) observer(k, out.Z, shares);
    Matrix S = net.all_reduce_sum(shares);
    Matrix G = -S;

    Matrix D;
    StiefelPoint candidate;
    double fbar_candidate = 0.0;
    bool stationary = false;
    for (int halvings = 0;; ++halvings) {
      SubproblemInput sub{out.Z.data, G, eta, prob.mu};
      // Repeated rejections switch to a high-budget inner solve from a cold
      // multiplier: the loosely solved subproblem need not yield a descent
      // direction, while a near-exact step is guaranteed to pass the test
      // once eta is small.  Inner iterations cost no communication.
      auto res = halvings < 3
                     ? solve_subproblem(sub, SubproblemStop{prev_step_norm, 10},
                                        upsilon_ws.size() ? &upsilon_ws : nullptr)
                     : solve_subproblem(sub, SubproblemStop{1e-14, 2000}, nullptr);
      D = res.step.data;
      // With adaptation the raw step scales with the current eta, so a
      // small-eta phase could fake convergence; correcting to the reference
      // step size keeps the stopping strength equal to the fixed-step method.
      if (D.norm() * (eta0 / eta) <= eps_g) {
        upsilon_ws = std::move(res.Upsilon);
        stationary = true;
        break;
      }
      candidate = polar_retract(out.Z.data + D);
      if (!cfg.adapt) {
        upsilon_ws = std::move(res.Upsilon);
        fbar_candidate = objective(prob, candidate);
        break;
      }
      fbar_candidate = objective(prob, candidate);
      const double model_decrease = D.squaredNorm() / (2.0 * eta);
      if (fbar - fbar_candidate >= 1e-4 * model_decrease) {
        upsilon_ws = std::move(res.Upsilon);
        ++consecutive_accepts;
        if (consecutive_accepts >= 2) {
          eta = std::min(eta * 1.05, eta_max);
          consecutive_accepts = 0;
        }
        break;
      }
      consecutive_accepts = 0;
      eta *= 0.5;
      if (halvings >= 60)
        throw run_error("manpg_run: step-size line search failed at iteration " +
                            std::to_string(k),
                        out.Z.data);
    }

    IterationRecord rec;
    rec.k = k;
    rec.step_norm = D.norm();
    rec.rounds = net.rounds();
    rec.bytes = net.bytes();
    rec.consensus = 0.0;  // single iterate, no local copies

    if (stationary) {
      rec.objective = fbar;
      rec.lagrangian = fbar;
      out.records.push_back(rec);
      out.converged = true;
      return out;
    }

    rec.objective = fbar_candidate;
    rec.lagrangian = fbar_candidate;
    if (!std::isfinite(fbar_candidate))
      throw run_error("manpg_run: non-finite objective at iteration " +
                          std::to_string(k),
                      out.Z.data);
    out.records.push_back(rec);
    out.Z = std::move(candidate);
    fbar = fbar_candidate;
    prev_step_norm = rec.step_norm;
  }

  out.converged = false;
  return out;
}

StiefelPoint riemannian_subgradient_warmstart(const SpcaProblem& prob,
                                              const StiefelPoint& Z0,
                                              int iters) {
  if (iters < 0) throw argument_error("warmstart: iters must be nonnegative");
  if (Z0.n() != prob.n() || Z0.p() != prob.p)
    throw shape_error("warmstart: initial point dimension mismatch");
  const double lipschitz = spectral_norm_sq_estimate(prob);
  StiefelPoint Z = Z0;
  for (int t = 0; t < iters; ++t) {
    Matrix grad = -grad_product(prob, Z.data);
    grad += l1_subgradient_min_norm(Z.data, grad, prob.mu, /*support_tol=*/0.0);
    Matrix dir = tangent_project(Z, grad).data;
    const double dir_norm = dir.norm();
    if (dir_norm <= 1e-14) break;  // already stationary
    // 1/sqrt(t+1) decay, scaled against both the curvature and the move
    // length so the retraction cannot overshoot on early iterations.
    const double alpha = 1.0 / ((2.0 * lipschitz + dir_norm + prob.mu) *
                                std::sqrt(static_cast<double>(t) + 1.0));
    Z = polar_retract(Z.data - alpha * dir);
  }
  return Z;
}

}  // namespace spca
