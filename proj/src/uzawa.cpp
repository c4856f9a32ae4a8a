#include "spca/uzawa.hpp"

#include <cmath>
#include <string>

#include "spca/kernels.hpp"

namespace spca {

namespace {

void validate(const SubproblemInput& in) {
  if (in.G.rows() != in.Z.rows() || in.G.cols() != in.Z.cols())
    throw shape_error("subproblem: G and Z dimensions differ");
  if (!(in.eta > 0.0)) throw argument_error("subproblem: eta must be positive");
  if (!(in.mu >= 0.0)) throw argument_error("subproblem: mu must be nonnegative");
  if (!in.G.allFinite()) throw argument_error("subproblem: G has non-finite entries");
}

// D^T Z + Z^T D, computed from one GEMM so the result is exactly symmetric.
Matrix tangency_violation(const Matrix& D, const Matrix& Z) {
  Matrix m = D.transpose() * Z;
  return m + m.transpose();
}

struct InnerLoopResult {
  Matrix D;
  Matrix Upsilon;
  int iterations;
};

template <typename StopPredicate>
InnerLoopResult run_inner(const SubproblemInput& in, const Matrix* warm_upsilon,
                          long cap, double tau, StopPredicate done) {
  const Index p = in.Z.cols();
  UzawaState state;
  state.D = Matrix::Zero(in.Z.rows(), p);
  if (warm_upsilon && warm_upsilon->rows() == p && warm_upsilon->cols() == p)
    state.Upsilon = *warm_upsilon;
  else
    state.Upsilon = Matrix::Zero(p, p);

  for (long j = 0; j < cap; ++j) {
    state.D = uzawa_primal(state, in);
    if (!state.D.allFinite())
      throw divergence_error("uzawa: non-finite primal iterate at inner step " +
                             std::to_string(j) + " (tau=" + std::to_string(tau) +
                             ", eta=" + std::to_string(in.eta) + ")");
    const double feas = tangency_violation(state.D, in.Z).norm();
    state.j = static_cast<int>(j) + 1;
    if (done(state, feas)) return {state.D, state.Upsilon, state.j};
    state.Upsilon = uzawa_dual(state, in, tau);
  }
  return {state.D, state.Upsilon, static_cast<int>(cap)};
}

}  // namespace

double default_tau(double eta) { return 1.0 / (2.0 * eta); }

Matrix uzawa_primal(const UzawaState& state, const SubproblemInput& in) {
  Matrix target = in.Z - in.eta * (in.G - in.Z * state.Upsilon);
  Matrix shrunk(target.rows(), target.cols());
  kernels::soft_threshold(target.data(), shrunk.data(),
                          static_cast<std::size_t>(target.size()),
                          in.eta * in.mu);
  return shrunk - in.Z;
}

Matrix uzawa_dual(const UzawaState& state, const SubproblemInput& in, double tau) {
  if (!(tau > 0.0)) throw argument_error("uzawa_dual: tau must be positive");
  return state.Upsilon - tau * tangency_violation(state.D, in.Z);
}

SubproblemResult solve_subproblem(const SubproblemInput& in, const SubproblemStop& stop,
                                  const Matrix* warm_upsilon) {
  validate(in);
  const double tau = default_tau(in.eta);
  auto inner = run_inner(in, warm_upsilon, stop.max_inner, tau,
                         [&](const UzawaState&, double feas) {
                           return feas <= stop.prev_step_norm;
                         });
  SubproblemResult res;
  res.step = TangentVector{std::move(inner.D), in.Z};
  res.iterations = inner.iterations;
  res.Upsilon = std::move(inner.Upsilon);
  return res;
}

SubproblemResult solve_subproblem_diagnostic(const SubproblemInput& in,
                                             const DiagnosticOptions& opt) {
  validate(in);
  const double tau = default_tau(in.eta);
  bool converged = false;
  // Tolerance follows the step scale once the step is larger than O(1); for
  // vanishing steps the violation bottoms out at the rounding floor of the
  // primal update, which the absolute part absorbs.
  auto inner = run_inner(in, nullptr, opt.max_inner, tau,
                         [&](const UzawaState& st, double feas) {
                           converged = feas <= opt.feas_tol *
                                                   std::max(st.D.norm(), 1.0);
                           return converged;
                         });
  if (!converged)
    throw divergence_error(
        "uzawa: diagnostic mode did not reach feasibility tol " +
        std::to_string(opt.feas_tol) + " within " + std::to_string(opt.max_inner) +
        " iterations (tau=" + std::to_string(tau) + ", eta=" +
        std::to_string(in.eta) + ")");
  SubproblemResult res;
  res.step = TangentVector{std::move(inner.D), in.Z};
  res.iterations = inner.iterations;
  res.Upsilon = std::move(inner.Upsilon);
  return res;
}

double subproblem_objective(const SubproblemInput& in, const Matrix& D) {
  Matrix shifted = in.Z + D;
  const double l1 = kernels::l1_norm(shifted.data(),
                                     static_cast<std::size_t>(shifted.size()));
  const double quad =
      kernels::sum_squares(D.data(), static_cast<std::size_t>(D.size()));
  return (in.G.array() * D.array()).sum() + quad / (2.0 * in.eta) + in.mu * l1;
}

}  // namespace spca
