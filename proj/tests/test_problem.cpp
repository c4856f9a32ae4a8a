#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "spca/oracle.hpp"
#include "spca/problem.hpp"
#include "spca/rng.hpp"

using namespace spca;

namespace {

Matrix random_samples(Index n, Index m, std::uint64_t seed) {
  return Rng(seed).uniform_pm1_matrix(n, m);
}

}  // namespace

TEST_CASE("objective equals the dense SVD value at the top singular vectors") {
  Matrix A = random_samples(20, 50, 1);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  const Index p = 4;
  auto prob = make_problem(shard_columns(A, 5), p, 0.0);
  StiefelPoint Z(svd.matrixU().leftCols(p));
  double want = 0.0;
  for (Index j = 0; j < p; ++j)
    want -= 0.5 * std::pow(svd.singularValues()(j), 2);
  CHECK(objective(prob, Z) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("objective is additive over any shard partition") {
  Matrix A = random_samples(16, 42, 2);
  auto Z = random_stiefel(16, 3, 3);
  const double whole = objective(make_problem(shard_columns(A, 1), 3, 0.4), Z);
  for (int d : {2, 3, 7})
    CHECK(objective(make_problem(shard_columns(A, d), 3, 0.4), Z) ==
          doctest::Approx(whole).epsilon(1e-9));
}

TEST_CASE("zero data reduces the objective to the l1 term") {
  auto prob = make_problem({DataShard{Matrix::Zero(10, 8), 0}}, 2, 0.7);
  auto Z = random_stiefel(10, 2, 4);
  CHECK(objective(prob, Z) ==
        doctest::Approx(0.7 * Z.data.cwiseAbs().sum()).epsilon(1e-12));
}

TEST_CASE("smooth part is rotation invariant, full objective is not") {
  Matrix A = random_samples(14, 30, 5);
  auto prob = make_problem(shard_columns(A, 2), 3, 0.3);
  auto Z = random_stiefel(14, 3, 6);
  auto O = random_stiefel(3, 3, 7);
  StiefelPoint Zrot(Z.data * O.data);
  CHECK(objective_smooth(prob, Z) ==
        doctest::Approx(objective_smooth(prob, Zrot)).epsilon(1e-9));
  StiefelPoint sparse = polar_retract(soft_threshold(Z.data, 0.15));
  StiefelPoint sparse_rot(sparse.data * O.data);
  CHECK(std::fabs(objective(prob, sparse) - objective(prob, sparse_rot)) > 1e-6);
}

TEST_CASE("local gradient product") {
  DataShard shard{random_samples(15, 40, 8), 0};
  Matrix X = random_samples(15, 3, 9);
  Matrix want = (shard.samples * shard.samples.transpose()) * X;
  CHECK((local_grad_product(shard, X) - want).norm() <= 1e-9 * want.norm());
  CHECK(local_grad_product(DataShard{Matrix::Zero(15, 7), 0}, X).isZero(0.0));
  CHECK((local_grad_product(DataShard{Matrix::Identity(15, 15), 0}, X) - X).norm() <=
        1e-12);
  CHECK_THROWS_AS(local_grad_product(shard, Matrix::Zero(14, 3)), shape_error);
}

TEST_CASE("stationarity residual vanishes at the dominant eigenspace") {
  Matrix A = random_samples(18, 36, 10);
  auto prob = make_problem(shard_columns(A, 3), 4, 0.0);
  Matrix V = oracle::dominant_eigenspace(A * A.transpose(), 4);
  auto [rn, rs] = stationarity_residual(prob, StiefelPoint(V));
  CHECK(rn <= 1e-8);
  CHECK(rs <= 1e-8);
}

TEST_CASE("stationarity residual closed form on zero data") {
  Matrix z(2, 1);
  z << 0.6, 0.8;
  auto prob = make_problem({DataShard{Matrix::Zero(2, 5), 0}}, 1, 0.3);
  auto [rn, rs] = stationarity_residual(prob, StiefelPoint::from_orthonormal(z));
  Matrix sgn = Matrix::Ones(2, 1);
  const double want = 0.3 * (sgn - z * (z.transpose() * sgn)).norm();
  CHECK(rn == doctest::Approx(want).epsilon(1e-12));
  CHECK(rs == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("stationarity residual is invariant to column permutation") {
  Matrix A = random_samples(12, 26, 11);
  auto prob = make_problem(shard_columns(A, 2), 3, 0.25);
  auto Z = random_stiefel(12, 3, 12);
  Matrix perm = Z.data;
  perm.col(0).swap(perm.col(2));
  auto [a1, a2] = stationarity_residual(prob, Z);
  auto [b1, b2] = stationarity_residual(prob, StiefelPoint(perm));
  CHECK(a1 == doctest::Approx(b1).epsilon(1e-10));
  CHECK(a2 == doctest::Approx(b2).epsilon(1e-10));
}

TEST_CASE("sparsity fraction") {
  CHECK(sparsity(StiefelPoint(Matrix::Identity(6, 2)), 1e-5) ==
        doctest::Approx(10.0 / 12.0));
  auto Z = random_stiefel(6, 2, 13);
  CHECK(sparsity(Z, 1e-12) == 0.0);
  CHECK_THROWS_AS(sparsity(Z, -1.0), argument_error);
}

TEST_CASE("preprocessing centers and normalizes rows") {
  Matrix A = preprocess(random_samples(9, 31, 14));
  for (Index i = 0; i < A.rows(); ++i) {
    CHECK(std::fabs(A.row(i).mean()) <= 1e-12);
    CHECK(A.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // constant row becomes zero after centering
  Matrix bad = random_samples(3, 10, 15);
  bad.row(1).setConstant(2.5);
  CHECK_THROWS_AS(preprocess(bad), argument_error);
}

TEST_CASE("column sharding partitions the matrix exactly") {
  Matrix A = random_samples(6, 17, 16);
  auto shards = shard_columns(A, 5);  // 17 = 4+4+3+3+3
  CHECK(shards.size() == 5);
  CHECK(shards[0].m() == 4);
  CHECK(shards[1].m() == 4);
  CHECK(shards[2].m() == 3);
  Index total = 0;
  for (auto& s : shards) total += s.m();
  CHECK(total == 17);
  auto prob = make_problem(shards, 2, 0.1);
  CHECK((prob.assemble() - A).norm() == 0.0);  // bitwise
  CHECK_THROWS_AS(shard_columns(A, 0), argument_error);
  CHECK_THROWS_AS(shard_columns(A, 18), argument_error);
}

TEST_CASE("problem validation") {
  Matrix A = random_samples(8, 12, 17);
  CHECK_THROWS_AS(make_problem({}, 2, 0.1), argument_error);
  CHECK_THROWS_AS(make_problem(shard_columns(A, 2), 0, 0.1), argument_error);
  CHECK_THROWS_AS(make_problem(shard_columns(A, 2), 9, 0.1), argument_error);
  CHECK_THROWS_AS(make_problem(shard_columns(A, 2), 2, -0.1), argument_error);
  auto mixed = shard_columns(A, 2);
  mixed[1].samples = Matrix::Zero(7, 5);
  CHECK_THROWS_AS(make_problem(mixed, 2, 0.1), shape_error);
}
