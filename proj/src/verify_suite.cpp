#include "spca/verify_suite.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

#include "spca/attack.hpp"
#include "spca/datagen.hpp"
#include "spca/dssal1.hpp"
#include "spca/kernels.hpp"
#include "spca/manpg.hpp"
#include "spca/oracle.hpp"
#include "spca/rng.hpp"
#include "spca/uzawa.hpp"

// Each check throws on failure via REQUIRE-style helpers and is independent
// of the others; seeds are fixed so the report is identical between runs.

namespace spca::verify {

namespace {

struct check_failure {
  std::string detail;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw check_failure{what};
}

void require_close(double a, double b, double tol, const std::string& what) {
  if (!(std::fabs(a - b) <= tol)) {
    std::ostringstream os;
    os << what << ": |" << a << " - " << b << "| > " << tol;
    throw check_failure{os.str()};
  }
}

void require_le(double a, double b, const std::string& what) {
  if (!(a <= b)) {
    std::ostringstream os;
    os << what << ": " << a << " > " << b;
    throw check_failure{os.str()};
  }
}

// Relative against the reference, floored at 1 so an exactly-zero reference
// degrades to an absolute comparison.
double rel_err(const Matrix& got, const Matrix& want) {
  const double scale = std::max(want.norm(), 1.0);
  return (got - want).norm() / scale;
}

// Random tangent direction at Z with the requested norm.
Matrix random_tangent(const StiefelPoint& Z, double norm, Rng& rng) {
  Matrix D = tangent_project(Z, rng.uniform_pm1_matrix(Z.n(), Z.p())).data;
  return D * (norm / D.norm());
}

SpcaProblem small_problem(Index n, Index m, int d, Index p, double mu,
                          std::uint64_t seed, double xi = 1.1) {
  GenSpec g;
  g.n = n;
  g.m = m;
  g.d = d;
  g.p = p;
  g.mu = mu;
  g.xi = xi;
  g.seed = seed;
  return generate(g);
}

// --- individual checks ----------------------------------------------------

void check_kernels_equivalence() {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.uniform01() * 97);
    std::vector<double> x(len);
    for (auto& v : x) v = 3.0 * rng.uniform_pm1();
    const double t = 0.5 * rng.uniform01();

    std::vector<double> ys(len), ya(len);
    kernels::detail::soft_threshold_scalar(x.data(), ys.data(), len, t);
    kernels::soft_threshold(x.data(), ya.data(), len, t);
    for (std::size_t i = 0; i < len; ++i)
      require(ys[i] == ya[i], "soft_threshold: scalar/simd mismatch");

    const double l1s = kernels::detail::l1_norm_scalar(x.data(), len);
    require_close(kernels::l1_norm(x.data(), len), l1s, 1e-12 * (1.0 + l1s),
                  "l1_norm scalar/simd");
    const double sqs = kernels::detail::sum_squares_scalar(x.data(), len);
    require_close(kernels::sum_squares(x.data(), len), sqs, 1e-12 * (1.0 + sqs),
                  "sum_squares scalar/simd");
    require(kernels::count_below(x.data(), len, 0.7) ==
                kernels::detail::count_below_scalar(x.data(), len, 0.7),
            "count_below scalar/simd mismatch");
  }
  // formula cases
  double v = 0.3, out = 0.0;
  kernels::soft_threshold(&v, &out, 1, 0.1);
  require_close(out, 0.2, 1e-15, "soft_threshold(0.3, 0.1)");
  v = -0.05;
  kernels::soft_threshold(&v, &out, 1, 0.1);
  require(out == 0.0, "soft_threshold dead zone");
  v = 0.0;
  kernels::soft_threshold(&v, &out, 1, 0.4);
  require(out == 0.0, "soft_threshold at zero");
}

void check_tangent_projection() {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto Z = random_stiefel(6, 2, rng.uniform01() * 1e9);
    Matrix Y = rng.uniform_pm1_matrix(6, 2);
    Matrix got = tangent_project(Z, Y).data;
    Matrix want = oracle::dense_tangent_project(Z.data, Y);
    require_le(rel_err(got, want), 1e-12, "tangent projection vs dense formula");
    // idempotence
    Matrix twice = tangent_project(Z, got).data;
    require_le((twice - got).norm(), 1e-12 * (1.0 + got.norm()),
               "tangent projection idempotence");
    // self-adjointness <P(Y1), Y2> = <Y1, P(Y2)>
    Matrix Y2 = rng.uniform_pm1_matrix(6, 2);
    const double lhs = (got.array() * Y2.array()).sum();
    const double rhs = (Y.array() * tangent_project(Z, Y2).data.array()).sum();
    require_close(lhs, rhs, 1e-10, "tangent projection self-adjointness");
    // a tangent vector is a fixed point
    Matrix T = tangent_project(Z, Y2).data;
    require_le((tangent_project(Z, T).data - T).norm(), 1e-12 * (1.0 + T.norm()),
               "tangent fixed point");
  }
  // p = 1 closed form: Z = e1, Y = [a; b] -> [0; b]
  StiefelPoint Z(Matrix::Identity(2, 1));
  Matrix Y(2, 1);
  Y << 0.7, -1.3;
  Matrix got = tangent_project(Z, Y).data;
  require_close(got(0, 0), 0.0, 1e-15, "p=1 projection, first entry");
  require_close(got(1, 0), -1.3, 1e-15, "p=1 projection, second entry");
}

void check_retraction_bounds() {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 5 + static_cast<Index>(rng.uniform01() * 16);
    const Index p = 1 + static_cast<Index>(rng.uniform01() *
                                           static_cast<double>(std::min<Index>(n, 6)));
    auto Z = random_stiefel(n, p, rng.uniform01() * 1e9);
    const double norm = 1e-4 * std::pow(1e4, rng.uniform01());  // log-uniform [1e-4, 1]
    Matrix D = random_tangent(Z, norm, rng);
    StiefelPoint R = polar_retract(Z.data + D);
    // 1e-13 absolute allowance: the bounds can be tight to O(||D||^4), below
    // what the retraction's own rounding resolves.
    require_le((R.data - Z.data).norm(), D.norm() + 1e-13, "retraction bound 1");
    require_le((R.data - Z.data - D).norm(), 0.5 * D.norm() * D.norm() + 1e-13,
               "retraction bound 2");
    require_le(R.orthonormality_defect(), 1e-12 * std::sqrt(double(p)),
               "retraction orthonormality");
  }
  // identity and scaling cases
  auto Z = random_stiefel(7, 3, 99);
  require_le((polar_retract(Z.data).data - Z.data).norm(), 1e-13,
             "retraction of an orthonormal matrix");
  Matrix C = Matrix::Zero(6, 2);
  C(0, 0) = 2.0;
  C(1, 1) = 2.0;
  Matrix want = Matrix::Zero(6, 2);
  want(0, 0) = 1.0;
  want(1, 1) = 1.0;
  require_le((polar_retract(C).data - want).norm(), 1e-14, "retraction of 2*I");
  bool threw = false;
  try {
    polar_retract(Matrix::Zero(5, 2));
  } catch (const singular_input_error&) {
    threw = true;
  }
  require(threw, "retraction must reject rank-deficient input");
}

void check_projection_distance() {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto X = random_stiefel(8, 3, rng.uniform01() * 1e9);
    auto Z = random_stiefel(8, 3, rng.uniform01() * 1e9);
    const double got = projection_distance(X, Z);
    const double want = oracle::dense_projection_distance(X.data, Z.data);
    require_close(got, want, 1e-10 * (1.0 + want), "projection distance vs dense");
    require_close(got, projection_distance(Z, X), 1e-14, "symmetry");
  }
  auto Z = random_stiefel(8, 3, 7);
  require_le(projection_distance(Z, Z), 1e-12, "distance to itself");
  auto O = random_stiefel(3, 3, 8);
  StiefelPoint rotated(Z.data * O.data);
  require_le(projection_distance(Z, rotated), 1e-10, "rotation invariance");
}

void check_random_stiefel() {
  auto a = random_stiefel(6, 2, 123);
  auto b = random_stiefel(6, 2, 123);
  require((a.data - b.data).norm() == 0.0, "same seed must reproduce bitwise");
  require_le(a.orthonormality_defect(), 1e-12 * std::sqrt(2.0), "orthonormality");
  auto sq = random_stiefel(5, 5, 77);
  require_close(std::fabs(sq.data.determinant()), 1.0, 1e-10,
                "square case |det| = 1");
}

void check_objective_oracle() {
  // mu = 0 at the top left singular vectors: f = -1/2 sum of top p sigma^2
  Rng rng(51);
  Matrix A = rng.uniform_pm1_matrix(20, 50);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  const Index p = 4;
  auto prob = make_problem(shard_columns(A, 5), p, 0.0);
  StiefelPoint Z(svd.matrixU().leftCols(p));
  double want = 0.0;
  for (Index j = 0; j < p; ++j)
    want -= 0.5 * svd.singularValues()(j) * svd.singularValues()(j);
  require_close(objective(prob, Z), want, 1e-9 * std::fabs(want),
                "objective vs dense SVD");

  // additivity across shard partitions
  auto one = make_problem(shard_columns(A, 1), p, 0.3);
  auto many = make_problem(shard_columns(A, 7), p, 0.3);
  auto Zr = random_stiefel(20, p, 9);
  require_close(objective(one, Zr), objective(many, Zr),
                1e-9 * std::fabs(objective(one, Zr)), "objective shard additivity");

  // zero data
  auto zero = make_problem({DataShard{Matrix::Zero(20, 30), 0}}, p, 0.25);
  require_close(objective(zero, Zr), 0.25 * Zr.data.cwiseAbs().sum(), 1e-12,
                "objective with zero data");

  // f invariant under rotation, f + r generally not
  auto O = random_stiefel(p, p, 10);
  StiefelPoint Zrot(Zr.data * O.data);
  require_close(objective_smooth(one, Zr), objective_smooth(one, Zrot),
                1e-9 * std::fabs(objective_smooth(one, Zr)),
                "smooth part rotation invariance");
  StiefelPoint Zs(soft_threshold(Zr.data, 0.0));  // dense Z; rotate a sparsified copy
  Matrix sparse = soft_threshold(Zr.data, 0.1);
  StiefelPoint Zq = polar_retract(sparse);
  StiefelPoint Zq_rot(Zq.data * O.data);
  require(std::fabs(objective(one, Zq) - objective(one, Zq_rot)) > 1e-6,
          "l1 term must break rotation invariance");
}

void check_local_grad_oracle() {
  Rng rng(61);
  DataShard shard{rng.uniform_pm1_matrix(15, 40), 0};
  Matrix X = rng.uniform_pm1_matrix(15, 3);
  Matrix want = (shard.samples * shard.samples.transpose()) * X;
  require_le(rel_err(local_grad_product(shard, X), want), 1e-9,
             "local gradient product vs dense");
  DataShard zero{Matrix::Zero(15, 10), 1};
  require(local_grad_product(zero, X).isZero(0.0), "zero shard");
  DataShard eye{Matrix::Identity(15, 15), 2};
  require_le((local_grad_product(eye, X) - X).norm(), 1e-12, "identity shard");
}

void check_stationarity_residual() {
  // classic PCA: dominant eigenbasis with mu = 0 is stationary
  auto prob = small_problem(24, 60, 3, 4, 0.0, 71);
  Matrix AAt = Matrix::Zero(24, 24);
  for (const auto& s : prob.shards) AAt += s.samples * s.samples.transpose();
  StiefelPoint Z(oracle::dominant_eigenspace(AAt, 4));
  auto [res_n, res_s] = stationarity_residual(prob, Z);
  require_le(res_n, 1e-8, "residual (normal) at the dominant eigenspace");
  require_le(res_s, 1e-8, "residual (skew) at the dominant eigenspace");

  // zero data, n=2, p=1: residual is mu * ||(I - zz^T) sign(z)||
  Matrix z(2, 1);
  z << 3.0 / 5.0, 4.0 / 5.0;
  auto zero = make_problem({DataShard{Matrix::Zero(2, 6), 0}}, 1, 0.2);
  StiefelPoint Zp = StiefelPoint::from_orthonormal(z);
  Matrix sgn(2, 1);
  sgn << 1.0, 1.0;
  const double want = 0.2 * (sgn - z * (z.transpose() * sgn)).norm();
  auto [rn, rs] = stationarity_residual(zero, Zp);
  require_close(rn, want, 1e-12, "closed-form residual, zero data");
  require_close(rs, 0.0, 1e-12, "skew residual vanishes for p = 1");

  // column permutation invariance
  auto prob2 = small_problem(12, 30, 2, 3, 0.4, 72);
  auto Zr = random_stiefel(12, 3, 73);
  Matrix perm = Zr.data;
  perm.col(0).swap(perm.col(2));
  auto [a1, a2] = stationarity_residual(prob2, Zr);
  auto [b1, b2] = stationarity_residual(prob2, StiefelPoint(perm));
  require_close(a1, b1, 1e-10, "residual invariant to column permutation (normal)");
  require_close(a2, b2, 1e-10, "residual invariant to column permutation (skew)");
}

void check_sparsity() {
  Matrix Z = Matrix::Identity(6, 2);
  require_close(sparsity(StiefelPoint(Z), 1e-5), 10.0 / 12.0, 1e-15,
                "sparsity of the identity block");
  auto Zr = random_stiefel(6, 2, 5);
  require(sparsity(Zr, 1e-12) == 0.0, "dense point has zero sparsity");
}

void check_uzawa_formulas() {
  Rng rng(81);
  auto Z = random_stiefel(6, 2, 811);
  // primal closed form against a direct evaluation
  SubproblemInput in{Z.data, rng.uniform_pm1_matrix(6, 2), 0.7, 0.3};
  UzawaState st;
  st.D = Matrix::Zero(6, 2);
  st.Upsilon = rng.uniform_pm1_matrix(2, 2);
  st.Upsilon = (st.Upsilon + st.Upsilon.transpose()).eval();
  Matrix got = uzawa_primal(st, in);
  Matrix target = in.Z - in.eta * (in.G - in.Z * st.Upsilon);
  Matrix want = soft_threshold(target, in.eta * in.mu) - in.Z;
  require_le((got - want).norm(), 1e-14, "primal step closed form");

  // dual: a tangent D leaves Upsilon unchanged
  Matrix D = tangent_project(Z, rng.uniform_pm1_matrix(6, 2)).data;
  st.D = D;
  Matrix up2 = uzawa_dual(st, in, 0.5);
  require_le((up2 - st.Upsilon).norm(), 1e-10 * (1.0 + st.Upsilon.norm()),
             "dual fixed point at tangency");

  // dual: D = Z shrinks Upsilon by 2 tau I
  st.D = Z.data;
  Matrix up3 = uzawa_dual(st, in, 0.5);
  require_le((up3 - (st.Upsilon - 2.0 * 0.5 * Matrix::Identity(2, 2))).norm(),
             1e-13, "dual step at D = Z");

  // mu = 0, Upsilon = 0, G = 0 gives D = 0
  SubproblemInput in0{Z.data, Matrix::Zero(6, 2), 0.7, 0.0};
  st.D = Matrix::Zero(6, 2);
  st.Upsilon = Matrix::Zero(2, 2);
  require_le(uzawa_primal(st, in0).norm(), 1e-15, "trivial primal step");
}

void check_uzawa_descent() {
  Rng rng(91);
  int kkt_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 5 + static_cast<Index>(rng.uniform01() * 12);
    const Index p = 1 + static_cast<Index>(rng.uniform01() *
                                           static_cast<double>(std::min<Index>(n, 4)));
    auto Z = random_stiefel(n, p, rng.uniform01() * 1e9);
    const bool smooth = trial % 2 == 0;
    SubproblemInput in{Z.data, rng.uniform_pm1_matrix(n, p),
                       0.05 + rng.uniform01(), smooth ? 0.0 : 0.2 * rng.uniform01()};
    auto res = solve_subproblem_diagnostic(in);
    const Matrix& D = res.step.data;
    const double g0 = subproblem_objective(in, Matrix::Zero(n, p));
    const double gD = subproblem_objective(in, D);
    const double quad = D.squaredNorm() / (2.0 * in.eta);
    require_le(quad - (g0 - gD), 1e-9 * (1.0 + std::fabs(g0)),
               "descent inequality g(0) - g(D) >= ||D||^2/(2 eta)");
    require_le(res.step.skew_defect(), 1e-9 * (1.0 + D.norm()),
               "diagnostic step tangency");
    if (smooth) {
      Matrix want = oracle::kkt_tangent_step(in.Z, in.G, in.eta);
      require_le((D - want).norm(), 1e-8 * (1.0 + want.norm()),
                 "mu = 0 step vs KKT oracle");
      ++kkt_checked;
    }
    // strong convexity of g with modulus 1/eta, sampled
    Matrix Dhat = rng.uniform_pm1_matrix(n, p);
    Matrix sub = in.G + D / in.eta;
    Matrix shifted = in.Z + D;
    for (Index jj = 0; jj < shifted.size(); ++jj) {
      const double zv = shifted.data()[jj];
      sub.data()[jj] += zv > 0.0 ? in.mu : (zv < 0.0 ? -in.mu : 0.0);
    }
    const double lhs = subproblem_objective(in, Dhat);
    const double rhs = gD + (sub.array() * (Dhat - D).array()).sum() +
                       (Dhat - D).squaredNorm() / (2.0 * in.eta);
    require_le(rhs - lhs, 1e-9 * (1.0 + std::fabs(lhs)), "strong convexity of g");
  }
  require(kkt_checked == 100, "KKT oracle sample count");

  // one-step optimality: G = -mu sign(Z) makes D = 0 optimal
  auto Z = random_stiefel(8, 2, 17);
  Matrix G = -0.4 * Z.data.array().sign().matrix();
  SubproblemInput in{Z.data, G, 0.5, 0.4};
  auto res = solve_subproblem(in, SubproblemStop{});
  require_le(res.step.data.norm(), 1e-10, "stationary input yields a null step");
  require(res.iterations == 1, "stationary input resolved in one inner iteration");
}

void check_multiplier_identity() {
  Rng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.uniform01() * 13);
    const Index p = 1 + static_cast<Index>(rng.uniform01() *
                                           static_cast<double>(std::min<Index>(n, 4)));
    const Index mi = 2 + static_cast<Index>(rng.uniform01() * 30);
    DataShard shard{rng.uniform_pm1_matrix(n, mi), 0};
    auto X = random_stiefel(n, p, rng.uniform01() * 1e9);
    AgentState agent = make_agent(shard, X, 1.0);
    Matrix implicit = agent.X.data * agent.W.transpose() +
                      agent.W * agent.X.data.transpose();
    Matrix dense = oracle::dense_multiplier(agent.X.data, shard.samples);
    require_le(rel_err(implicit, dense), 1e-9, "implicit multiplier vs closed form");
    require(oracle::numerical_rank(implicit, 1e-10) <= 2 * p,
            "multiplier rank at most 2p");
    require_le((agent.W.transpose() * agent.X.data).norm(),
               1e-9 * (1.0 + agent.W.norm()), "W orthogonal to X");
  }
  // alignment extremes
  Rng rng2(102);
  auto X = random_stiefel(10, 2, 103);
  Matrix inside = X.data * rng2.uniform_pm1_matrix(2, 6);  // columns in span(X)
  AgentState a1 = make_agent(DataShard{inside, 0}, X, 1.0);
  require_le(a1.W.norm(), 1e-9, "columns inside span(X) give W = 0");
  // columns orthogonal to span(X)
  Matrix full = orthonormalize(rng2.uniform_pm1_matrix(10, 10));
  Matrix Xo = full.leftCols(2);
  Matrix Ao = full.rightCols(4);
  AgentState a2 = make_agent(DataShard{Ao, 0}, StiefelPoint(Xo), 1.0);
  Matrix want = -(Ao * (Ao.transpose() * Xo));
  require_le((a2.W - want).norm(), 1e-10, "orthogonal data gives W = -A A^T X");
}

void check_apply_H_oracle() {
  Rng rng(111);
  for (int trial = 0; trial < 60; ++trial) {
    DataShard shard{rng.uniform_pm1_matrix(12, 30), 0};
    auto X = random_stiefel(12, 3, rng.uniform01() * 1e9);
    auto Z = random_stiefel(12, 3, rng.uniform01() * 1e9);
    AgentState agent = make_agent(shard, X, 0.3 + rng.uniform01());
    Matrix V = rng.uniform_pm1_matrix(12, 3);
    Matrix want = oracle::dense_local_operator(shard.samples, agent.X.data,
                                               agent.W, agent.beta, Z.data) *
                  V;
    require_le(rel_err(apply_H(agent, shard, Z, V), want), 1e-8,
               "H application vs dense operator");
  }
  // W = 0, beta = 0 edge: pure data term
  DataShard shard{rng.uniform_pm1_matrix(12, 20), 0};
  auto X = random_stiefel(12, 3, 112);
  AgentState agent;
  agent.X = X;
  agent.W = Matrix::Zero(12, 3);
  agent.beta = 1e-30;  // effectively zero but valid
  agent.cached_AAtX = local_grad_product(shard, X.data);
  Matrix V = rng.uniform_pm1_matrix(12, 3);
  require_le(rel_err(apply_H(agent, shard, X, V), local_grad_product(shard, V)),
             1e-12, "H reduces to the data term");
}

void check_ssi_step() {
  Rng rng(121);
  // at the dominant eigenbasis of A A^T with Z = X, one step is a fixed point
  DataShard shard{rng.uniform_pm1_matrix(14, 40), 0};
  Matrix AAt = shard.samples * shard.samples.transpose();
  StiefelPoint X(oracle::dominant_eigenspace(AAt, 3));
  AgentState agent = make_agent(shard, X, 2.0);
  StiefelPoint next = ssi_step(agent, shard, X);
  require_le(oracle::dense_projection_distance(next.data, X.data), 1e-8,
             "eigenbasis is a fixed point of the local step");

  // zero data: the step rotates span(X) onto span(Z)
  DataShard zero{Matrix::Zero(14, 6), 0};
  auto Xr = random_stiefel(14, 3, 122);
  auto Zr = random_stiefel(14, 3, 123);
  AgentState a2 = make_agent(zero, Xr, 0.5);
  StiefelPoint rotated = ssi_step(a2, zero, Zr);
  require_le(projection_distance(rotated, Zr), 1e-9,
             "zero data rotates the local span onto Z");
}

void check_decrease_diagnostics() {
  Rng rng(131);
  DataShard shard{rng.uniform_pm1_matrix(12, 25), 0};
  auto Z = random_stiefel(12, 3, 132);
  auto X0 = random_stiefel(12, 3, 133);
  AgentState before = make_agent(shard, X0, 4.0);
  AgentState after = before;
  after.X = ssi_step(before, shard, Z);
  update_multiplier(after, shard);
  // identical states at a non-stationary point must fail the decrease test
  auto [dec_same, con_same] =
      check_decrease_conditions(before, before, shard, Z, 1.0, 1.0, 0.9);
  require(!dec_same, "no decrease without movement");
  (void)con_same;
  // the exact dominant eigenspace of H satisfies the contraction trivially
  Matrix H = oracle::dense_local_operator(shard.samples, before.X.data, before.W,
                                          before.beta, Z.data);
  AgentState at_opt = before;
  at_opt.X = StiefelPoint(oracle::dominant_eigenspace(H, 3));
  auto [dec_opt, con_opt] =
      check_decrease_conditions(before, at_opt, shard, Z, 1.0, 1.0, 0.9);
  require(con_opt, "contraction holds at the exact eigenspace");
  (void)dec_opt;
}

void check_masked_product_oracle() {
  Rng rng(141);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.uniform01() * 47);
    const Index p = 1 + static_cast<Index>(rng.uniform01() *
                                           static_cast<double>(std::min<Index>(n, 6)));
    AgentState agent;
    agent.X = random_stiefel(n, p, rng.uniform01() * 1e9);
    agent.W = rng.uniform_pm1_matrix(n, p);
    agent.beta = 0.1 + 3.0 * rng.uniform01();
    auto Z = random_stiefel(n, p, rng.uniform01() * 1e9);
    Matrix got = masked_local_product(agent, Z);
    Matrix want = oracle::dense_mask(agent.X.data, agent.W, agent.beta) * Z.data;
    require_le(rel_err(got, want), 1e-9, "masked product vs dense mask");
  }
  // closed forms
  auto Z = random_stiefel(9, 2, 142);
  AgentState same;
  same.X = Z;
  same.W = Matrix::Zero(9, 2);
  same.beta = 0.7;
  require_le((masked_local_product(same, Z) + 0.7 * Z.data).norm(), 1e-12,
             "X = Z, W = 0 gives -beta Z");
  Matrix full = orthonormalize(Rng(143).uniform_pm1_matrix(9, 4));
  AgentState orth;
  orth.X = StiefelPoint(full.leftCols(2));
  orth.W = Matrix::Zero(9, 2);
  orth.beta = 1.1;
  require_le(masked_local_product(orth, StiefelPoint(full.rightCols(2))).norm(),
             1e-12, "orthogonal spans give a zero product");
}

void check_feasible_mask_identity() {
  auto prob = small_problem(20, 44, 3, 3, 0.2, 151);
  auto Z = random_stiefel(20, 3, 152);
  std::vector<AgentState> agents;
  for (const auto& s : prob.shards) agents.push_back(make_agent(s, Z, 1.0 + s.agent_id));
  require_le(feasible_mask_identity_check(agents, prob.shards, Z), 1e-8,
             "identity at the feasible point");

  // same subspaces through per-agent rotations
  Rng rng(153);
  std::vector<AgentState> rotated;
  for (const auto& s : prob.shards) {
    auto O = random_stiefel(3, 3, rng.uniform01() * 1e9);
    AgentState a;
    a.X = StiefelPoint(Z.data * O.data);
    a.beta = 1.0 + s.agent_id;
    update_multiplier(a, s);
    rotated.push_back(std::move(a));
  }
  require_le(feasible_mask_identity_check(rotated, prob.shards, Z), 1e-8,
             "identity under per-agent rotations");

  // a genuine perturbation must be visible
  std::vector<AgentState> perturbed = agents;
  Matrix T = random_tangent(Z, 0.3, rng);
  perturbed[0].X = polar_retract(Z.data + T);
  update_multiplier(perturbed[0], prob.shards[0]);
  require(feasible_mask_identity_check(perturbed, prob.shards, Z) > 1e-3,
          "perturbation detected");
}

void check_network() {
  Network net(3);
  std::vector<Matrix> contrib{Matrix::Zero(4, 2), Matrix::Zero(4, 2),
                              Matrix::Zero(4, 2)};
  require(net.all_reduce_sum(contrib).isZero(0.0), "zero contributions sum to zero");
  require(net.rounds() == 1, "round counter");
  require(net.bytes() == 3LL * 4 * 2 * 8, "byte counter");

  contrib[0](0, 0) = 1.0;
  contrib[1](1, 0) = 1.0;
  contrib[2](2, 0) = 1.0;
  Matrix sum = net.all_reduce_sum(contrib);
  require(sum(0, 0) == 1.0 && sum(1, 0) == 1.0 && sum(2, 0) == 1.0,
          "basis columns sum");

  Rng rng(161);
  std::vector<Matrix> random_contrib;
  for (int i = 0; i < 3; ++i) random_contrib.push_back(rng.uniform_pm1_matrix(5, 2));
  Matrix s1 = net.all_reduce_sum(random_contrib);
  Matrix s2 = net.all_reduce_sum(random_contrib);
  require((s1 - s2).norm() == 0.0, "fixed order reproduces bitwise");
  Network other(3, {2, 0, 1});
  Matrix s3 = other.all_reduce_sum(random_contrib);
  require_le((s1 - s3).norm(), 1e-14 * (1.0 + s1.norm()),
             "different orders agree to rounding");

  bool threw = false;
  try {
    std::vector<Matrix> missing{Matrix::Zero(4, 2), Matrix(), Matrix::Zero(4, 2)};
    net.all_reduce_sum(missing);
  } catch (const protocol_error& e) {
    threw = std::string(e.what()).find("agent 1") != std::string::npos;
  }
  require(threw, "missing contribution names the agent");
}

void check_datagen() {
  GenSpec g;
  g.n = 40;
  g.m = 90;
  g.d = 4;
  g.p = 5;
  g.xi = 1.1;
  g.mu = 0.1;
  g.seed = 2024;
  Matrix raw = generate_raw(g);
  Eigen::JacobiSVD<Matrix> svd(raw);
  for (Index i = 0; i < g.n; ++i)
    require_close(svd.singularValues()(i), std::pow(1.1, -double(i)), 1e-10,
                  "raw spectrum decay");
  auto prob = generate(g);
  Matrix A = prob.assemble();
  for (Index i = 0; i < A.rows(); ++i) {
    require_le(std::fabs(A.row(i).mean()), 1e-12, "row mean after preprocessing");
    require_close(A.row(i).norm(), 1.0, 1e-12, "row norm after preprocessing");
  }
  // sharding is an exact partition
  Matrix B = generate(g).assemble();
  require((A - B).norm() == 0.0, "generation reproduces bitwise");
  Index total = 0;
  for (const auto& s : prob.shards) total += s.m();
  require(total == g.m, "shards cover every sample");
  // xi = 1: flat spectrum
  g.xi = 1.0;
  Eigen::JacobiSVD<Matrix> flat(generate_raw(g));
  require_close(flat.singularValues()(g.n - 1), 1.0, 1e-10, "flat spectrum tail");
}

void check_attack_reconstruction() {
  Rng rng(171);
  const Index n = 30, p = 4;
  Matrix M = rng.uniform_pm1_matrix(n, n);
  AttackState st;
  for (int j = 0; j < 12; ++j) {
    Matrix Z = random_stiefel(n, p, rng.uniform01() * 1e9).data;
    st.observe(Z, M * Z);
  }
  Matrix Y = reconstruct(st);
  require_le(rel_err(Y, M), 1e-6, "exact recovery of a fixed linear map");

  // single observation: minimum-norm among exact solutions
  AttackState single;
  Matrix Z0 = random_stiefel(n, p, 172).data;
  single.observe(Z0, M * Z0);
  Matrix Y1 = reconstruct(single);
  require_le((Y1 * Z0 - M * Z0).norm(), 1e-8 * (1.0 + M.norm()),
             "exact fit of the underdetermined system");
  // any perturbation in the null space has strictly larger norm
  Matrix P_perp = Matrix::Identity(n, n) - Z0 * Z0.transpose();
  Matrix other = Y1 + rng.uniform_pm1_matrix(n, n) * P_perp;
  require((other * Z0 - M * Z0).norm() <= 1e-7 * (1.0 + M.norm()) &&
              other.norm() > Y1.norm(),
          "minimum-norm property");

  // symmetrized estimate never hurts against a symmetric target
  Matrix sym_target = M + M.transpose();
  AttackState st2;
  for (int j = 0; j < 3; ++j) {
    Matrix Z = random_stiefel(n, p, 1000 + j).data;
    st2.observe(Z, sym_target * Z);
  }
  Matrix Y2 = reconstruct(st2);
  require_le((symmetrize(Y2) - sym_target).norm(), (Y2 - sym_target).norm() + 1e-12,
             "symmetrization is never worse");

  bool threw = false;
  try {
    reconstruct(AttackState{});
  } catch (const argument_error&) {
    threw = true;
  }
  require(threw, "reconstruct requires an observation");
}

void check_constant_mask_ablation() {
  // When the mask never changes, the eavesdropper identifies it exactly;
  // the time variation is what denies recovery.
  Rng rng(181);
  const Index n = 24, p = 3;
  auto prob = small_problem(n, 60, 1, p, 0.1, 182);
  auto Z0 = random_stiefel(n, p, 183);
  AgentState frozen = make_agent(prob.shards[0], Z0, 1.3);
  Matrix mask = oracle::dense_mask(frozen.X.data, frozen.W, frozen.beta);
  std::vector<Matrix> Zh, Sh;
  for (int j = 0; j < 12; ++j) {
    Matrix Z = random_stiefel(n, p, rng.uniform01() * 1e9).data;
    Zh.push_back(Z);
    Sh.push_back(masked_local_product(frozen, StiefelPoint(Z)));
  }
  auto curve = attack_curve(Zh, Sh, mask, 4);
  require_le(curve.back().error, 1e-6 * (1.0 + mask.norm()),
             "constant mask is fully identified");
}

void check_pca_degeneration() {
  GenSpec g;
  g.n = 40;
  g.m = 120;
  g.d = 1;
  g.p = 3;
  g.xi = 1.1;
  g.mu = 0.0;
  g.seed = 191;
  auto prob = generate(g);
  Matrix AAt = prob.shards[0].samples * prob.shards[0].samples.transpose();
  Matrix V = oracle::dominant_eigenspace(AAt, g.p);
  auto Z0 = riemannian_subgradient_warmstart(
      prob, random_stiefel(g.n, g.p, Rng::derive(g.seed, 2)), 200);

  Network net1(1);
  auto dres = dssal1_run(prob, net1, DriverConfig{}, Z0);
  require(dres.converged, "splitting solver converges on the PCA instance");
  require_le(oracle::dense_projection_distance(dres.Z.data, V), 1e-4,
             "splitting solver reaches the dominant eigenspace");

  Network net2(1);
  ManpgConfig mc;
  auto mres = manpg_run(prob, net2, mc, Z0);
  require(mres.converged, "proximal-gradient baseline converges");
  require_le(oracle::dense_projection_distance(mres.Z.data, V), 1e-4,
             "baseline reaches the dominant eigenspace");
}

void check_zero_data_run() {
  auto prob = make_problem({DataShard{Matrix::Zero(16, 12), 0},
                            DataShard{Matrix::Zero(16, 12), 1}},
                           2, 0.3);
  auto Z0 = random_stiefel(16, 2, 201);
  Network net(2);
  DriverConfig cfg;
  cfg.max_iter = 20000;
  auto res = dssal1_run(prob, net, cfg, Z0);
  require(res.converged, "zero-data run converges");
  for (std::size_t i = 1; i < res.records.size(); ++i)
    require_le(res.records[i].objective, res.records[i - 1].objective + 1e-10,
               "zero-data objective is non-increasing");
  require_le(res.records.back().consensus, 1e-6, "zero-data consensus");
}

void check_driver_invariants() {
  auto prob = small_problem(30, 960, 5, 3, 0.05, 10);
  auto Z0 = riemannian_subgradient_warmstart(
      prob, random_stiefel(30, 3, Rng::derive(10, 2)), 500);
  Network net(5);
  auto res = dssal1_run(prob, net, DriverConfig{}, Z0);
  require(res.converged, "desk run converges");
  require(res.records.size() == static_cast<std::size_t>(net.rounds()),
          "one communication round per outer iteration");
  for (std::size_t i = 0; i < res.records.size(); ++i)
    require(res.records[i].rounds == static_cast<long>(i) + 1,
            "round counter tracks the iteration index");

  // Diagnostic Lagrangian.  At the practical penalty defaults the sequence
  // jitters at the 1e-5 scale while trending down, so only the trend is
  // asserted here; the strict per-iteration descent guarantee applies under
  // the theory-level parameter conditions and is checked below at those
  // parameters.
  require(res.records.back().lagrangian < res.records[1].lagrangian,
          "Lagrangian trend is not decreasing");

  DriverConfig theory;
  double beta_sum = 0.0;
  for (int i = 0; i < prob.d(); ++i) {
    theory.beta_overrides.push_back(condition2_beta_lower_bound(prob, i));
    beta_sum += theory.beta_overrides.back();
  }
  theory.eta = std::min(1.0 / beta_sum,
                        condition1_eta_upper_bound(prob, theory.beta_overrides));
  theory.max_iter = 300;
  require(theory.beta_overrides[0] >
              10.0 * default_beta(prob.shards[0], Z0, prob.mu),
          "theory penalty floor should dwarf the practical default");
  Network net_theory(prob.d());
  auto theory_run = dssal1_run(prob, net_theory, theory, Z0);
  double worst = 0.0;
  for (std::size_t i = 1; i < theory_run.records.size(); ++i)
    worst = std::max(worst, theory_run.records[i].lagrangian -
                                theory_run.records[i - 1].lagrangian);
  require_le(worst, 1e-8,
             "Lagrangian must be non-increasing under the theory parameters");

  // stationarity at the returned point
  auto [rn, rs] = stationarity_residual(prob, res.Z);
  require_le(rn, 1e-3, "normal residual at the solution");
  require_le(rs, 1e-3, "skew residual at the solution");

  // determinism: an identical rerun reproduces the records bitwise
  Network net2(5);
  auto res2 = dssal1_run(prob, net2, DriverConfig{}, Z0);
  require(res.records.size() == res2.records.size(), "rerun iteration count");
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    require(res.records[i].objective == res2.records[i].objective &&
                res.records[i].step_norm == res2.records[i].step_norm &&
                res.records[i].consensus == res2.records[i].consensus,
            "rerun records are bitwise identical");
  }
}

void check_manpg_baseline() {
  // zero data: warm-started baseline settles in a handful of rounds
  auto zero = make_problem({DataShard{Matrix::Zero(18, 20), 0}}, 2, 0.3);
  auto Z0 = riemannian_subgradient_warmstart(zero, random_stiefel(18, 2, 221), 500);
  Network net(1);
  ManpgConfig cfg;
  auto res = manpg_run(zero, net, cfg, Z0);
  require(res.converged, "zero-data baseline converges");
  require(net.rounds() <= 5, "zero-data baseline needs at most 5 rounds");

  // shares are the exact data products
  auto prob = small_problem(16, 48, 4, 2, 0.2, 222);
  auto Zr = random_stiefel(16, 2, 223);
  Network net2(4);
  auto [znext, shares] = manpg_round(prob, net2, Zr, 0.5, prob.mu);
  for (int i = 0; i < 4; ++i) {
    Matrix want = (prob.shards[i].samples * prob.shards[i].samples.transpose()) *
                  Zr.data;
    require_le(rel_err(shares[static_cast<std::size_t>(i)], want), 1e-9,
               "published share equals the dense data product");
  }
  require_le(znext.orthonormality_defect(), 1e-11, "round output is orthonormal");
}

void check_warmstart() {
  auto prob = small_problem(20, 60, 2, 3, 0.0, 231);
  auto Z0 = random_stiefel(20, 3, 232);
  auto same = riemannian_subgradient_warmstart(prob, Z0, 0);
  require((same.data - Z0.data).norm() == 0.0, "zero iterations is the identity");
  auto w1 = riemannian_subgradient_warmstart(prob, Z0, 120);
  auto w2 = riemannian_subgradient_warmstart(prob, Z0, 120);
  require((w1.data - w2.data).norm() == 0.0, "warm start is deterministic");
  // mu = 0 reduces to Riemannian gradient descent; prefixes of the same
  // deterministic trajectory must have non-increasing objective.
  double prev = objective(prob, Z0);
  for (int t = 10; t <= 120; t += 10) {
    const double cur =
        objective(prob, riemannian_subgradient_warmstart(prob, Z0, t));
    require_le(cur, prev + 1e-12, "descent trajectory");
    prev = cur;
  }
  require_le(objective(prob, w1), objective(prob, Z0), "warm start improves on Z0");
}

struct NamedCheck {
  const char* name;
  std::function<void()> fn;
};

const NamedCheck kChecks[] = {
    {"kernels-equivalence", check_kernels_equivalence},
    {"tangent-projection-oracle", check_tangent_projection},
    {"retraction-bounds", check_retraction_bounds},
    {"projection-distance-oracle", check_projection_distance},
    {"random-stiefel", check_random_stiefel},
    {"objective-oracle", check_objective_oracle},
    {"local-grad-oracle", check_local_grad_oracle},
    {"stationarity-residual", check_stationarity_residual},
    {"sparsity", check_sparsity},
    {"uzawa-formulas", check_uzawa_formulas},
    {"uzawa-descent-and-kkt", check_uzawa_descent},
    {"multiplier-identity", check_multiplier_identity},
    {"local-operator-oracle", check_apply_H_oracle},
    {"ssi-step", check_ssi_step},
    {"decrease-diagnostics", check_decrease_diagnostics},
    {"masked-product-oracle", check_masked_product_oracle},
    {"feasible-mask-identity", check_feasible_mask_identity},
    {"network-allreduce", check_network},
    {"datagen-spectrum", check_datagen},
    {"attack-reconstruction", check_attack_reconstruction},
    {"constant-mask-ablation", check_constant_mask_ablation},
    {"pca-degeneration", check_pca_degeneration},
    {"zero-data-run", check_zero_data_run},
    {"driver-invariants", check_driver_invariants},
    {"manpg-baseline", check_manpg_baseline},
    {"warmstart", check_warmstart},
};

}  // namespace

std::vector<CheckResult> run_checks(const std::string& filter) {
  std::vector<CheckResult> results;
  for (const auto& check : kChecks) {
    std::string name = check.name;
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    CheckResult r;
    r.name = name;
    try {
      check.fn();
      r.pass = true;
    } catch (const check_failure& f) {
      r.pass = false;
      r.detail = f.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace spca::verify
