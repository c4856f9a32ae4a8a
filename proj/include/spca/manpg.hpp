#pragma once

#include <utility>
#include <vector>

#include "spca/dssal1.hpp"
#include "spca/network.hpp"
#include "spca/problem.hpp"
#include "spca/stiefel.hpp"
#include "spca/types.hpp"

namespace spca {

struct ManpgConfig {
  double eta0 = -1.0;  // < 0: 1 / ||A||_2^2 (power-iteration estimate)
  bool adapt = false;  // step-size adaptation (the -Ada variant)
  double eta_max_factor = 32.0;  // ceiling for the adapted step, as a multiple of eta0
  double eps_g = -1.0;  // < 0: 1e-8 * n * p
  long max_iter = 50000;
};

struct ManpgResult {
  StiefelPoint Z;
  std::vector<IterationRecord> records;
  bool converged = false;
};

// ||A||_2^2 of the assembled data by power iteration through the shards.
double spectral_norm_sq_estimate(const SpcaProblem& prob);

// One fixed-step round: every agent publishes S_i = A_i A_i^T Z, the
// all-reduce forms the full gradient product, and Z moves by the tangent
// proximal step followed by the polar retraction.  Returns the next iterate
// together with the per-agent shares (what an eavesdropper sees).
std::pair<StiefelPoint, std::vector<Matrix>> manpg_round(const SpcaProblem& prob,
                                                         Network& net,
                                                         const StiefelPoint& Z,
                                                         double eta, double mu);

// Full loop with stopping rule ||D||_F <= eps_g.  With cfg.adapt the step is
// accepted only when the objective decrease clears a small fraction of the
// model decrease; rejected steps halve eta and re-solve against the same
// shares (no extra communication round).  After two consecutive accepts eta
// grows by 1.05.
ManpgResult manpg_run(const SpcaProblem& prob, Network& net, const ManpgConfig& cfg,
                      const StiefelPoint& Z0, const ShareObserver& observer = {});

// Common starting point used by every solver in an experiment: `iters`
// steps of Z <- retract(Z - alpha_t P_T(subgradient)) with the minimal-norm
// subgradient selection and a 1/sqrt(t+1) diminishing step scaled by the
// data's curvature estimate and the move length.
StiefelPoint riemannian_subgradient_warmstart(const SpcaProblem& prob,
                                              const StiefelPoint& Z0,
                                              int iters = 500);

}  // namespace spca
