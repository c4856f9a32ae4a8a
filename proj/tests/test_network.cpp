#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "spca/network.hpp"
#include "spca/rng.hpp"

using namespace spca;

TEST_CASE("all-reduce sums and counts") {
  Network net(3);
  std::vector<Matrix> zeros(3, Matrix::Zero(4, 2));
  CHECK(net.all_reduce_sum(zeros).isZero(0.0));
  CHECK(net.rounds() == 1);
  CHECK(net.bytes() == 3LL * 4 * 2 * 8);

  std::vector<Matrix> basis(3, Matrix::Zero(3, 1));
  basis[0](0, 0) = 1.0;
  basis[1](1, 0) = 1.0;
  basis[2](2, 0) = 1.0;
  Matrix sum = net.all_reduce_sum(basis);
  CHECK(sum.isApprox(Matrix::Ones(3, 1)));
  CHECK(net.rounds() == 2);
  CHECK(net.bytes() == 3LL * 4 * 2 * 8 + 3LL * 3 * 1 * 8);

  auto report = communication_report(net);
  CHECK(report.rounds == 2);
  CHECK(report.bytes == net.bytes());
  net.reset();
  CHECK(net.rounds() == 0);
  CHECK(net.bytes() == 0);
}

TEST_CASE("protocol violations name the offending agent") {
  Network net(3);
  std::vector<Matrix> two(2, Matrix::Zero(2, 2));
  CHECK_THROWS_AS(net.all_reduce_sum(two), protocol_error);

  std::vector<Matrix> missing{Matrix::Zero(2, 2), Matrix(), Matrix::Zero(2, 2)};
  try {
    net.all_reduce_sum(missing);
    CHECK(false);
  } catch (const protocol_error& e) {
    CHECK(std::string(e.what()).find("agent 1") != std::string::npos);
  }

  std::vector<Matrix> shapes{Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                             Matrix::Zero(3, 2)};
  try {
    net.all_reduce_sum(shapes);
    CHECK(false);
  } catch (const protocol_error& e) {
    CHECK(std::string(e.what()).find("agent 2") != std::string::npos);
  }
  CHECK(net.rounds() == 0);  // failed calls do not count
}

TEST_CASE("fixed reduction order reproduces bitwise; orders differ by ulps") {
  Rng rng(5);
  std::vector<Matrix> contrib;
  for (int i = 0; i < 4; ++i) contrib.push_back(rng.uniform_pm1_matrix(5, 3));

  Network a(4);
  Matrix s1 = a.all_reduce_sum(contrib);
  Matrix s2 = a.all_reduce_sum(contrib);
  CHECK((s1 - s2).norm() == 0.0);

  Network b(4, {3, 1, 0, 2});
  Matrix s3 = b.all_reduce_sum(contrib);
  CHECK((s1 - s3).norm() <= 1e-14 * (1.0 + s1.norm()));
}

TEST_CASE("reduction order must be a permutation") {
  CHECK_THROWS_AS(Network(3, {0, 1}), argument_error);
  CHECK_THROWS_AS(Network(3, {0, 1, 1}), argument_error);
  CHECK_THROWS_AS(Network(3, {0, 1, 3}), argument_error);
  CHECK_THROWS_AS(Network(0), argument_error);
  Network ok(3, {2, 1, 0});
  CHECK(ok.agent_count() == 3);
}
