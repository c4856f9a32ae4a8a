#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "spca/datagen.hpp"
#include "spca/dssal1.hpp"
#include "spca/manpg.hpp"
#include "spca/oracle.hpp"
#include "spca/rng.hpp"

using namespace spca;

namespace {

SpcaProblem desk_problem(Index n, Index m, int d, Index p, double mu,
                         std::uint64_t seed) {
  GenSpec g;
  g.n = n;
  g.m = m;
  g.d = d;
  g.p = p;
  g.mu = mu;
  g.xi = 1.1;
  g.seed = seed;
  return generate(g);
}

}  // namespace

TEST_CASE("spectral norm estimate matches the dense value") {
  auto prob = desk_problem(14, 30, 3, 2, 0.1, 1);
  Matrix AAt = Matrix::Zero(14, 14);
  for (const auto& s : prob.shards) AAt += s.samples * s.samples.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(AAt);
  CHECK(spectral_norm_sq_estimate(prob) ==
        doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-8));
}

TEST_CASE("one round publishes the exact data products") {
  auto prob = desk_problem(16, 48, 4, 2, 0.2, 2);
  auto Z = random_stiefel(16, 2, 3);
  Network net(4);
  auto [next, shares] = manpg_round(prob, net, Z, 0.2, prob.mu);
  CHECK(net.rounds() == 1);
  REQUIRE(shares.size() == 4);
  for (int i = 0; i < 4; ++i) {
    Matrix want =
        (prob.shards[i].samples * prob.shards[i].samples.transpose()) * Z.data;
    CHECK((shares[static_cast<std::size_t>(i)] - want).norm() <=
          1e-9 * (1.0 + want.norm()));
  }
  CHECK(next.orthonormality_defect() <= 1e-11);
}

TEST_CASE("zero data round reduces to a prox-only step") {
  auto prob = make_problem({DataShard{Matrix::Zero(12, 10), 0}}, 2, 0.2);
  auto Z = random_stiefel(12, 2, 4);
  Network net(1);
  auto [next, shares] = manpg_round(prob, net, Z, 0.5, prob.mu);
  CHECK(shares[0].isZero(0.0));
  // the step equals the tangent-restricted prox step computed directly
  SubproblemInput in{Z.data, Matrix::Zero(12, 2), 0.5, prob.mu};
  auto res = solve_subproblem(in, SubproblemStop{});
  CHECK((next.data - polar_retract(Z.data + res.step.data).data).norm() <= 1e-12);
}

TEST_CASE("d=1, mu=0 converges to the dominant eigenspace") {
  auto prob = desk_problem(40, 200, 1, 3, 0.0, 5);
  Matrix V = oracle::dominant_eigenspace(
      prob.shards[0].samples * prob.shards[0].samples.transpose(), 3);
  auto Z0 = riemannian_subgradient_warmstart(prob, random_stiefel(40, 3, 6), 100);
  Network net(1);
  ManpgConfig cfg;
  auto res = manpg_run(prob, net, cfg, Z0);
  CHECK(res.converged);
  CHECK(oracle::dense_projection_distance(res.Z.data, V) <= 1e-4);
}

TEST_CASE("zero data terminates within five rounds after warm start") {
  auto prob = make_problem({DataShard{Matrix::Zero(18, 20), 0}}, 2, 0.3);
  auto Z0 = riemannian_subgradient_warmstart(prob, random_stiefel(18, 2, 7), 500);
  Network net(1);
  auto res = manpg_run(prob, net, ManpgConfig{}, Z0);
  CHECK(res.converged);
  CHECK(net.rounds() <= 5);
}

TEST_CASE("records track rounds for both variants") {
  auto prob = desk_problem(20, 640, 4, 3, 0.1, 8);
  auto Z0 = riemannian_subgradient_warmstart(prob, random_stiefel(20, 3, 9), 150);
  for (bool adapt : {false, true}) {
    Network net(4);
    ManpgConfig cfg;
    cfg.adapt = adapt;
    auto res = manpg_run(prob, net, cfg, Z0);
    CHECK(res.converged);
    CHECK(res.records.size() == static_cast<std::size_t>(net.rounds()));
    for (std::size_t i = 0; i < res.records.size(); ++i)
      CHECK(res.records[i].rounds == static_cast<long>(i) + 1);
  }
}

TEST_CASE("solvers from a common warm start agree on the solution profile") {
  auto prob = desk_problem(30, 960, 5, 3, 0.05, 10);
  auto Z0 = riemannian_subgradient_warmstart(prob, random_stiefel(30, 3, 11), 300);

  Network net1(5);
  auto dres = dssal1_run(prob, net1, DriverConfig{}, Z0);
  Network net2(5);
  ManpgConfig mc;
  mc.adapt = true;
  auto mres = manpg_run(prob, net2, mc, Z0);
  REQUIRE(dres.converged);
  REQUIRE(mres.converged);

  const double fd = objective(prob, dres.Z);
  const double fm = objective(prob, mres.Z);
  CHECK(std::fabs(fd - fm) <= 1e-2 * std::fabs(fd));
  CHECK(std::fabs(sparsity(dres.Z, 1e-5) - sparsity(mres.Z, 1e-5)) <= 0.02);
}

TEST_CASE("warm start basics") {
  auto prob = desk_problem(20, 60, 2, 3, 0.0, 12);
  auto Z0 = random_stiefel(20, 3, 13);
  CHECK((riemannian_subgradient_warmstart(prob, Z0, 0).data - Z0.data).norm() == 0.0);
  auto a = riemannian_subgradient_warmstart(prob, Z0, 80);
  auto b = riemannian_subgradient_warmstart(prob, Z0, 80);
  CHECK((a.data - b.data).norm() == 0.0);
  CHECK(a.orthonormality_defect() <= 1e-11);
  // mu = 0: prefixes of the trajectory have non-increasing objective
  double prev = objective(prob, Z0);
  for (int t = 10; t <= 80; t += 10) {
    const double cur =
        objective(prob, riemannian_subgradient_warmstart(prob, Z0, t));
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}
