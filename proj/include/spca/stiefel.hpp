#pragma once

#include <cstdint>

#include "spca/types.hpp"

namespace spca {

// Orthonormality defect tolerance, scaled by sqrt(p) at the point of use.
inline constexpr double kOrthTol = 1e-12;

// Relative singular-value threshold below which an input is treated as rank
// deficient.
inline constexpr double kRankTol = 1e-12;

// An n x p matrix with orthonormal columns.
struct StiefelPoint {
  Matrix data;

  StiefelPoint() = default;
  explicit StiefelPoint(Matrix m) : data(std::move(m)) {}

  Index n() const { return data.rows(); }
  Index p() const { return data.cols(); }

  // ||Z^T Z - I||_F
  double orthonormality_defect() const;

  // Validating factory; throws argument_error when the defect exceeds
  // kOrthTol * sqrt(p).
  static StiefelPoint from_orthonormal(Matrix m, double tol = kOrthTol);
};

// Direction attached to the point it is tangent at (D^T Z + Z^T D = 0).
struct TangentVector {
  Matrix data;
  Matrix base;

  // ||D^T Z + Z^T D||_F
  double skew_defect() const;
};

// Orthogonal projection of Y onto the tangent space at Z:
//   (I - ZZ^T) Y + Z (Z^T Y - Y^T Z) / 2,
// evaluated as Y - Z sym(Z^T Y) so no n x n matrix is formed.
TangentVector tangent_project(const StiefelPoint& Z, const Matrix& Y);

// Nearest matrix with orthonormal columns, U V^T from the thin SVD of C.
// Throws singular_input_error when C is numerically rank deficient.
StiefelPoint polar_retract(const Matrix& C);

// Entrywise shrinkage toward zero by t (the proximal map of t * ||.||_1).
Matrix soft_threshold(const Matrix& X, double t);

// ||X X^T - Z Z^T||_F computed through the p x p Gram identity
// ||X X^T - Z Z^T||_F^2 = 2p - 2 ||X^T Z||_F^2.
double projection_distance(const StiefelPoint& X, const StiefelPoint& Z);

// Squared variant used by the consensus measures.
double projection_distance_sq(const StiefelPoint& X, const StiefelPoint& Z);

// Orthonormalization of a matrix with entries uniform on [-1, 1).
// Deterministic for a given seed.
StiefelPoint random_stiefel(Index n, Index p, std::uint64_t seed);

// Thin QR orthonormalization with a deterministic sign convention: each
// column is flipped so its largest-magnitude entry is positive.
Matrix orthonormalize(const Matrix& M);

}  // namespace spca
