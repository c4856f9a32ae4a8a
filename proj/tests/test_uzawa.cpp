#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "spca/oracle.hpp"
#include "spca/rng.hpp"
#include "spca/uzawa.hpp"

using namespace spca;

namespace {

SubproblemInput random_input(Index n, Index p, double mu, std::uint64_t seed) {
  Rng rng(seed);
  return SubproblemInput{random_stiefel(n, p, rng.uniform_pm1() * 1e9).data,
                         rng.uniform_pm1_matrix(n, p), 0.1 + rng.uniform01(), mu};
}

}  // namespace

TEST_CASE("primal step closed form") {
  auto in = random_input(6, 2, 0.3, 1);
  Rng rng(2);
  UzawaState st;
  st.D = Matrix::Zero(6, 2);
  Matrix u = rng.uniform_pm1_matrix(2, 2);
  st.Upsilon = u + u.transpose();
  Matrix want =
      soft_threshold(in.Z - in.eta * (in.G - in.Z * st.Upsilon), in.eta * in.mu) -
      in.Z;
  CHECK((uzawa_primal(st, in) - want).norm() <= 1e-14);

  // no gradient, no multiplier, no shrinkage: null step
  SubproblemInput calm{in.Z, Matrix::Zero(6, 2), 0.5, 0.0};
  st.Upsilon = Matrix::Zero(2, 2);
  CHECK(uzawa_primal(st, calm).norm() <= 1e-15);
}

TEST_CASE("dual step properties") {
  auto in = random_input(7, 3, 0.2, 3);
  StiefelPoint Z(in.Z);
  Rng rng(4);
  UzawaState st;
  st.Upsilon = Matrix::Zero(3, 3);

  st.D = tangent_project(Z, rng.uniform_pm1_matrix(7, 3)).data;
  CHECK((uzawa_dual(st, in, 0.7) - st.Upsilon).norm() <= 1e-10 * (1.0 + st.D.norm()));

  st.D = in.Z;  // maximally infeasible
  Matrix want = st.Upsilon - 2.0 * 0.7 * Matrix::Identity(3, 3);
  CHECK((uzawa_dual(st, in, 0.7) - want).norm() <= 1e-13);

  CHECK_THROWS_AS(uzawa_dual(st, in, 0.0), argument_error);
}

TEST_CASE("dual iterate stays symmetric along the run") {
  auto in = random_input(8, 3, 0.25, 5);
  UzawaState st;
  st.D = Matrix::Zero(8, 3);
  st.Upsilon = Matrix::Zero(3, 3);
  const double tau = default_tau(in.eta);
  for (int j = 0; j < 25; ++j) {
    st.D = uzawa_primal(st, in);
    st.Upsilon = uzawa_dual(st, in, tau);
    CHECK((st.Upsilon - st.Upsilon.transpose()).norm() <= 1e-12);
  }
}

TEST_CASE("stationary input resolves to the null step in one inner iteration") {
  auto Z = random_stiefel(8, 2, 6);
  Matrix G = -0.4 * Z.data.array().sign().matrix();
  SubproblemInput in{Z.data, G, 0.5, 0.4};
  auto res = solve_subproblem(in, SubproblemStop{});
  CHECK(res.step.data.norm() <= 1e-10);
  CHECK(res.iterations == 1);
}

TEST_CASE("production stop respects the inner cap") {
  auto in = random_input(10, 3, 0.3, 7);
  auto res = solve_subproblem(in, SubproblemStop{0.0, 10});  // unreachable threshold
  CHECK(res.iterations == 10);
}

TEST_CASE("diagnostic mode returns a tangent, descent-bearing step") {
  for (int trial = 0; trial < 40; ++trial) {
    auto in = random_input(9, 3, trial % 2 ? 0.2 : 0.0, 100 + trial);
    auto res = solve_subproblem_diagnostic(in);
    const Matrix& D = res.step.data;
    CHECK(res.step.skew_defect() <= 1e-9 * (1.0 + D.norm()));
    const double g0 = subproblem_objective(in, Matrix::Zero(9, 3));
    const double gD = subproblem_objective(in, D);
    CHECK(g0 - gD >= D.squaredNorm() / (2.0 * in.eta) - 1e-9 * (1.0 + std::fabs(g0)));
  }
}

TEST_CASE("smooth case matches the dense KKT oracle") {
  for (int trial = 0; trial < 20; ++trial) {
    auto in = random_input(6, 2, 0.0, 200 + trial);
    auto res = solve_subproblem_diagnostic(in);
    Matrix want = oracle::kkt_tangent_step(in.Z, in.G, in.eta);
    CHECK((res.step.data - want).norm() <= 1e-8 * (1.0 + want.norm()));
  }
}

TEST_CASE("strong convexity of the subproblem objective") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto in = random_input(7, 2, 0.3, 300 + trial);
    auto res = solve_subproblem_diagnostic(in);
    const Matrix& D = res.step.data;
    Matrix Dhat = rng.uniform_pm1_matrix(7, 2);
    Matrix sub = in.G + D / in.eta;
    Matrix shifted = in.Z + D;
    for (Index i = 0; i < shifted.size(); ++i) {
      const double v = shifted.data()[i];
      sub.data()[i] += v > 0.0 ? in.mu : (v < 0.0 ? -in.mu : 0.0);
    }
    const double lhs = subproblem_objective(in, Dhat);
    const double rhs = subproblem_objective(in, D) +
                       (sub.array() * (Dhat - D).array()).sum() +
                       (Dhat - D).squaredNorm() / (2.0 * in.eta);
    CHECK(lhs >= rhs - 1e-9 * (1.0 + std::fabs(lhs)));
  }
}

TEST_CASE("input validation") {
  auto in = random_input(5, 2, 0.1, 10);
  SubproblemInput bad_eta{in.Z, in.G, 0.0, 0.1};
  CHECK_THROWS_AS(solve_subproblem(bad_eta, SubproblemStop{}), argument_error);
  SubproblemInput bad_g{in.Z,
                        Matrix::Constant(5, 2, std::numeric_limits<double>::infinity()),
                        0.5, 0.1};
  CHECK_THROWS_AS(solve_subproblem(bad_g, SubproblemStop{}), argument_error);
  SubproblemInput bad_shape{in.Z, Matrix::Zero(4, 2), 0.5, 0.1};
  CHECK_THROWS_AS(solve_subproblem(bad_shape, SubproblemStop{}), shape_error);
}
