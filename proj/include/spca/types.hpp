#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace spca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension mismatch between operands.
struct shape_error : error {
  using error::error;
};

// A parameter is outside its documented domain.
struct argument_error : error {
  using error::error;
};

// Input matrix is numerically rank deficient where full column rank is required.
struct singular_input_error : error {
  using error::error;
};

// An iteration produced non-finite values.
struct divergence_error : error {
  using error::error;
};

// Simulated-network contract violation (wrong contribution count or shape).
struct protocol_error : error {
  using error::error;
};

// Config file cannot be parsed or fails schema validation.
struct config_error : error {
  using error::error;
};

// Solver run aborted; carries the last finite iterate.
struct run_error : error {
  Matrix last_good;
  run_error(const std::string& msg, Matrix last) : error(msg), last_good(std::move(last)) {}
};

}  // namespace spca
