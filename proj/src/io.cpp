#include "spca/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace spca {

std::string format_double(double v) {
  char buf[40];
  // 17 significant digits round-trip; drop them when fewer suffice
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw error("save_matrix: cannot open '" + path + "'");
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw error("save_matrix: write failed for '" + path + "'");
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("load_matrix: cannot open '" + path + "'");
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0)
    throw error("load_matrix: bad header in '" + path + "'");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j)))
        throw error("load_matrix: truncated data in '" + path + "'");
  return m;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_iteration_csv(const std::string& path,
                         const std::vector<IterationRecord>& records) {
  auto out = open_out(path);
  out << "# spca-iterations v1\n";
  out << "k,objective,consensus,step_norm,rounds,bytes,lagrangian\n";
  for (const auto& r : records) {
    out << r.k << ',' << format_double(r.objective) << ','
        << format_double(r.consensus) << ',' << format_double(r.step_norm) << ','
        << r.rounds << ',' << r.bytes << ',' << format_double(r.lagrangian)
        << '\n';
  }
  if (!out) throw error("write failed for '" + path + "'");
}

void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
  auto out = open_out(path);
  out << "# spca-compare v1\n";
  out << "param_value,algo,rounds,wall_time,final_objective,sparsity\n";
  for (const auto& r : rows) {
    out << format_double(r.param_value) << ',' << csv_escape(r.algo) << ','
        << r.rounds << ',' << format_double(r.wall_time) << ','
        << format_double(r.final_objective) << ',' << format_double(r.sparsity)
        << '\n';
  }
  if (!out) throw error("write failed for '" + path + "'");
}

void write_attack_csv(const std::string& path, const std::vector<AttackRow>& rows) {
  auto out = open_out(path);
  out << "# spca-attack v1\n";
  out << "round,manpg_error,dssal1_error\n";
  for (const auto& r : rows) {
    out << r.round << ',' << format_double(r.manpg_error) << ','
        << format_double(r.dssal1_error) << '\n';
  }
  if (!out) throw error("write failed for '" + path + "'");
}

void write_summary_json(const std::string& path, const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["final_objective"] = summary.final_objective;
  j["sparsity"] = summary.sparsity;
  j["rounds"] = summary.rounds;
  j["wall_time"] = summary.wall_time;
  j["converged"] = summary.converged;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw error("write failed for '" + path + "'");
}

}  // namespace spca
