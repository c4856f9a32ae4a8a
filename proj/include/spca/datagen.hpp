#pragma once

#include <cstdint>

#include "spca/problem.hpp"
#include "spca/types.hpp"

namespace spca {

// Synthetic instance description.  The data matrix is built as an
// economy-size SVD U Sigma V^T with Sigma_ii = xi^(1-i), then preprocessed
// (row centering, row normalization) and sharded column-wise into d blocks.
struct GenSpec {
  Index n = 0;
  Index m = 0;
  int d = 1;
  Index p = 0;
  double xi = 1.1;
  double mu = 0.0;
  std::uint64_t seed = 0;
};

// The factor matrix before preprocessing; its singular values are exactly
// the specified decay.  Requires n <= m and xi >= 1.
Matrix generate_raw(const GenSpec& spec);

// Full pipeline: raw factors, preprocessing, sharding.
SpcaProblem generate(const GenSpec& spec);

}  // namespace spca
