#pragma once

#include "spca/problem.hpp"
#include "spca/types.hpp"

// Independent dense reference computations for the verification suites.
// Everything here deliberately materializes the n x n matrices the production
// code avoids, and shares no code path with it.

namespace spca::oracle {

// (I - Z Z^T) Y + Z (Z^T Y - Y^T Z) / 2, evaluated literally.
Matrix dense_tangent_project(const Matrix& Z, const Matrix& Y);

// Low-rank multiplier in closed form:
//   -X X^T (A A^T) (I - X X^T) - (I - X X^T) (A A^T) X X^T
Matrix dense_multiplier(const Matrix& X, const Matrix& A);

// Mask matrix Q = Lambda - beta X X^T from an explicit Lambda factor pair.
Matrix dense_mask(const Matrix& X, const Matrix& W, double beta);

// Local operator H = A A^T + (X W^T + W X^T) + beta Z Z^T.
Matrix dense_local_operator(const Matrix& A, const Matrix& X, const Matrix& W,
                            double beta, const Matrix& Z);

// ||X X^T - Z Z^T||_F via the materialized difference.
double dense_projection_distance(const Matrix& X, const Matrix& Z);

// Top-p eigenvectors of the symmetric matrix S (descending eigenvalues).
Matrix dominant_eigenspace(const Matrix& S, Index p);

// Exact solution of  min <G, D> + ||D||^2/(2 eta)  s.t.  D^T Z + Z^T D = 0,
// assembled and solved as one dense KKT linear system in (vec D, vech Y).
Matrix kkt_tangent_step(const Matrix& Z, const Matrix& G, double eta);

// Numerical rank at a relative singular-value cutoff.
Index numerical_rank(const Matrix& M, double rel_cutoff);

}  // namespace spca::oracle
