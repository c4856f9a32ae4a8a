#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "spca/oracle.hpp"
#include "spca/rng.hpp"
#include "spca/stiefel.hpp"

using namespace spca;

TEST_CASE("tangent projection matches the displayed formula") {
  Rng rng(1);
  auto Z = random_stiefel(6, 2, 11);
  Matrix Y = rng.uniform_pm1_matrix(6, 2);
  Matrix got = tangent_project(Z, Y).data;
  Matrix want = oracle::dense_tangent_project(Z.data, Y);
  CHECK((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
}

TEST_CASE("tangent projection p=1 closed form and fixed points") {
  StiefelPoint Z(Matrix::Identity(2, 1));
  Matrix Y(2, 1);
  Y << 0.37, 2.1;
  Matrix got = tangent_project(Z, Y).data;
  CHECK(got(0, 0) == doctest::Approx(0.0));
  CHECK(got(1, 0) == doctest::Approx(2.1));

  Rng rng(2);
  auto Zr = random_stiefel(7, 3, 12);
  Matrix T = tangent_project(Zr, rng.uniform_pm1_matrix(7, 3)).data;
  CHECK(TangentVector{T, Zr.data}.skew_defect() <= 1e-10 * (1.0 + T.norm()));
  Matrix twice = tangent_project(Zr, T).data;
  CHECK((twice - T).norm() <= 1e-12 * (1.0 + T.norm()));
}

TEST_CASE("tangent projection rejects shape mismatches") {
  auto Z = random_stiefel(5, 2, 13);
  CHECK_THROWS_AS(tangent_project(Z, Matrix::Zero(5, 3)), shape_error);
  CHECK_THROWS_AS(tangent_project(Z, Matrix::Zero(4, 2)), shape_error);
}

TEST_CASE("polar retraction basics") {
  auto Z = random_stiefel(8, 3, 21);
  CHECK((polar_retract(Z.data).data - Z.data).norm() <= 1e-13);
  CHECK((polar_retract(2.0 * Z.data).data - Z.data).norm() <= 1e-13);
  CHECK_THROWS_AS(polar_retract(Matrix::Zero(5, 2)), singular_input_error);
  // rows < cols is a shape problem, not a rank problem
  CHECK_THROWS_AS(polar_retract(Matrix::Ones(2, 4)), shape_error);
}

TEST_CASE("polar retraction obeys the two step bounds") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    auto Z = random_stiefel(9, 3, 1000 + trial);
    Matrix D = tangent_project(Z, rng.uniform_pm1_matrix(9, 3)).data;
    D *= (1e-3 * std::pow(1e3, rng.uniform01())) / D.norm();
    auto R = polar_retract(Z.data + D);
    CHECK((R.data - Z.data).norm() <= D.norm() + 1e-13);
    CHECK((R.data - Z.data - D).norm() <= 0.5 * D.squaredNorm() + 1e-13);
  }
}

TEST_CASE("retraction output is bitwise deterministic") {
  Rng rng(23);
  Matrix C = rng.uniform_pm1_matrix(10, 4);
  Matrix a = polar_retract(C).data;
  Matrix b = polar_retract(C).data;
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("soft threshold on matrices") {
  Matrix X(2, 2);
  X << 0.3, -0.05, 0.0, -2.0;
  Matrix Y = soft_threshold(X, 0.1);
  CHECK(Y(0, 0) == doctest::Approx(0.2));
  CHECK(Y(0, 1) == 0.0);
  CHECK(Y(1, 0) == 0.0);
  CHECK(Y(1, 1) == doctest::Approx(-1.9));
  CHECK_THROWS_AS(soft_threshold(X, -0.1), argument_error);
}

TEST_CASE("projection distance matches the dense computation") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto X = random_stiefel(8, 3, 300 + trial);
    auto Z = random_stiefel(8, 3, 600 + trial);
    const double want = oracle::dense_projection_distance(X.data, Z.data);
    CHECK(projection_distance(X, Z) == doctest::Approx(want).epsilon(1e-10));
    CHECK(projection_distance(X, Z) ==
          doctest::Approx(projection_distance(Z, X)).epsilon(1e-12));
  }
  auto Z = random_stiefel(8, 3, 32);
  CHECK(projection_distance(Z, Z) <= 1e-12);
  auto O = random_stiefel(3, 3, 33);
  CHECK(projection_distance(Z, StiefelPoint(Z.data * O.data)) <= 1e-10);
  CHECK_THROWS_AS(projection_distance(Z, random_stiefel(8, 2, 34)), shape_error);
}

TEST_CASE("random stiefel points") {
  auto a = random_stiefel(6, 2, 99);
  CHECK(a.orthonormality_defect() <= 1e-12 * std::sqrt(2.0));
  CHECK((a.data - random_stiefel(6, 2, 99).data).norm() == 0.0);
  CHECK((a.data - random_stiefel(6, 2, 98).data).norm() > 1e-3);
  auto square = random_stiefel(5, 5, 77);
  CHECK(std::fabs(square.data.determinant()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(random_stiefel(3, 4, 1), argument_error);
}

TEST_CASE("validating factory rejects non-orthonormal input") {
  Matrix bad = Matrix::Ones(4, 2);
  CHECK_THROWS_AS(StiefelPoint::from_orthonormal(bad), argument_error);
  auto good = StiefelPoint::from_orthonormal(Matrix::Identity(4, 2));
  CHECK(good.n() == 4);
  CHECK(good.p() == 2);
}
