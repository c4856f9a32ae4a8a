#pragma once

#include <string>
#include <vector>

#include "spca/dssal1.hpp"
#include "spca/types.hpp"

namespace spca {

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

// Plain-text matrix format: first line "rows cols", then one
// space-separated row per line, written with round-trip precision.
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

// RFC 4180 style field quoting (only applied when needed).
std::string csv_escape(const std::string& field);

// Versioned per-iteration CSV:
//   # spca-iterations v1
//   k,objective,consensus,step_norm,rounds,bytes,lagrangian
void write_iteration_csv(const std::string& path,
                         const std::vector<IterationRecord>& records);

struct CompareRow {
  double param_value = 0.0;
  std::string algo;
  long rounds = 0;
  double wall_time = 0.0;
  double final_objective = 0.0;
  double sparsity = 0.0;
};

// # spca-compare v1
// param_value,algo,rounds,wall_time,final_objective,sparsity
void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows);

struct AttackRow {
  long round = 0;
  double manpg_error = 0.0;
  double dssal1_error = 0.0;
};

// # spca-attack v1
// round,manpg_error,dssal1_error
void write_attack_csv(const std::string& path, const std::vector<AttackRow>& rows);

struct RunSummary {
  double final_objective = 0.0;
  double sparsity = 0.0;
  long rounds = 0;
  double wall_time = 0.0;
  bool converged = false;
};

void write_summary_json(const std::string& path, const RunSummary& summary);

}  // namespace spca
