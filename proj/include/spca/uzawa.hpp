#pragma once

#include <limits>

#include "spca/stiefel.hpp"
#include "spca/types.hpp"

namespace spca {

// Tangent-restricted proximal step at Z:
//   min over D in T_Z of  <G, D> + ||D||_F^2 / (2 eta) + mu ||Z + D||_1.
// G is the gradient-like term of the caller (masked-product sum or -A A^T Z).
struct SubproblemInput {
  Matrix Z;
  Matrix G;
  double eta = 0.0;
  double mu = 0.0;
};

// Inner primal-dual state: step candidate D and the symmetric multiplier of
// the tangency constraint.
struct UzawaState {
  Matrix D;
  Matrix Upsilon;
  int j = 0;
};

// Production stopping rule: accept the first inner iterate whose tangency
// violation falls below the previous outer step norm, cap at max_inner.
struct SubproblemStop {
  double prev_step_norm = std::numeric_limits<double>::infinity();
  int max_inner = 10;
};

struct SubproblemResult {
  TangentVector step;
  int iterations = 0;
  Matrix Upsilon;  // final multiplier, reusable as a warm start
};

// D(j+1) = prox_{eta r}( Z - eta (G - Z Upsilon(j)) ) - Z
Matrix uzawa_primal(const UzawaState& state, const SubproblemInput& in);

// Upsilon(j+1) = Upsilon(j) - tau (D^T Z + Z^T D), evaluated with state.D.
Matrix uzawa_dual(const UzawaState& state, const SubproblemInput& in, double tau);

// Dual step size; tau = 1 / (2 eta) unless overridden.
double default_tau(double eta);

// Runs the primal-dual iteration under the production stopping rule.
// warm_upsilon, when non-null and correctly sized, seeds Upsilon(0);
// otherwise Upsilon(0) = 0.  Throws divergence_error on non-finite iterates.
SubproblemResult solve_subproblem(const SubproblemInput& in, const SubproblemStop& stop,
                                  const Matrix* warm_upsilon = nullptr);

// Diagnostic mode: iterate to a tangency violation below feas_tol with the
// cap lifted.  Used by the property suites; throws divergence_error if the
// cap is hit.
struct DiagnosticOptions {
  double feas_tol = 1e-10;
  long max_inner = 200000;
};

SubproblemResult solve_subproblem_diagnostic(const SubproblemInput& in,
                                             const DiagnosticOptions& opt = {});

// g(D) = <G, D> + ||D||_F^2 / (2 eta) + mu ||Z + D||_1
double subproblem_objective(const SubproblemInput& in, const Matrix& D);

}  // namespace spca
