#include "spca/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spca {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::dssal1:
      return "dssal1";
    case Algo::manpg:
      return "manpg";
    case Algo::manpg_ada:
      return "manpg_ada";
  }
  return "?";
}

namespace {

struct Cursor {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw config_error(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const Cursor& c, const std::string& v) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') c.fail("expected a number, got '" + v + "'");
  return x;
}

long parse_long(const Cursor& c, const std::string& v) {
  char* end = nullptr;
  long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') c.fail("expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_seed(const Cursor& c, const std::string& v) {
  char* end = nullptr;
  unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    c.fail("expected a nonnegative integer seed, got '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const Cursor& c, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  c.fail("expected true/false, got '" + v + "'");
}

// "auto" maps to the sentinel that triggers the built-in default.
double parse_double_or_auto(const Cursor& c, const std::string& v) {
  if (v == "auto") return -1.0;
  double x = parse_double(c, v);
  if (!(x > 0.0)) c.fail("expected a positive number or 'auto', got '" + v + "'");
  return x;
}

std::vector<double> parse_double_list(const Cursor& c, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) c.fail("empty list element");
    out.push_back(parse_double(c, item));
  }
  if (out.empty()) c.fail("expected a comma-separated list");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  Cursor cur{origin, 0};
  std::string section;  // "" = top level
  std::istringstream in(text);
  std::string raw;

  while (std::getline(in, raw)) {
    ++cur.line;
    std::string line = raw;
    // strip comments
    std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') cur.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "gen" && section != "driver" && section != "manpg" &&
          section != "outputs" && section != "sweep")
        cur.fail("unknown section [" + section + "]");
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) cur.fail("expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) cur.fail("empty key");
    if (value.empty()) cur.fail("empty value for '" + key + "'");

    if (section.empty()) {
      if (key == "seed") {
        cfg.gen.seed = parse_seed(cur, value);
      } else if (key == "algo") {
        if (value == "dssal1")
          cfg.algo = Algo::dssal1;
        else if (value == "manpg")
          cfg.algo = Algo::manpg;
        else if (value == "manpg_ada")
          cfg.algo = Algo::manpg_ada;
        else
          cur.fail("algo must be dssal1, manpg, or manpg_ada");
      } else if (key == "attack") {
        cfg.attack = parse_bool(cur, value);
      } else if (key == "warmstart_iters") {
        long v = parse_long(cur, value);
        if (v < 0) cur.fail("warmstart_iters must be nonnegative");
        cfg.warmstart_iters = static_cast<int>(v);
      } else {
        cur.fail("unknown top-level key '" + key + "'");
      }
    } else if (section == "gen") {
      if (key == "n")
        cfg.gen.n = parse_long(cur, value);
      else if (key == "m")
        cfg.gen.m = parse_long(cur, value);
      else if (key == "d")
        cfg.gen.d = static_cast<int>(parse_long(cur, value));
      else if (key == "p")
        cfg.gen.p = parse_long(cur, value);
      else if (key == "xi")
        cfg.gen.xi = parse_double(cur, value);
      else if (key == "mu")
        cfg.gen.mu = parse_double(cur, value);
      else
        cur.fail("unknown key '" + key + "' in [gen]");
    } else if (section == "driver") {
      if (key == "eps_c")
        cfg.driver.eps_c = parse_double(cur, value);
      else if (key == "eps_g")
        cfg.driver.eps_g = parse_double_or_auto(cur, value);
      else if (key == "max_iter")
        cfg.driver.max_iter = parse_long(cur, value);
      else if (key == "eta")
        cfg.driver.eta = parse_double_or_auto(cur, value);
      else if (key == "beta")
        cfg.driver.beta_overrides = parse_double_list(cur, value);
      else
        cur.fail("unknown key '" + key + "' in [driver]");
    } else if (section == "manpg") {
      if (key == "eta0")
        cfg.manpg.eta0 = parse_double_or_auto(cur, value);
      else if (key == "adapt")
        cfg.manpg.adapt = parse_bool(cur, value);
      else if (key == "eps_g")
        cfg.manpg.eps_g = parse_double_or_auto(cur, value);
      else if (key == "max_iter")
        cfg.manpg.max_iter = parse_long(cur, value);
      else
        cur.fail("unknown key '" + key + "' in [manpg]");
    } else if (section == "outputs") {
      if (key == "dir")
        cfg.out_dir = value;
      else
        cur.fail("unknown key '" + key + "' in [outputs]");
    } else if (section == "sweep") {
      if (key == "param") {
        if (value != "n" && value != "p" && value != "mu" && value != "d")
          cur.fail("sweep param must be one of n, p, mu, d");
        cfg.sweep.param = value;
      } else if (key == "values") {
        cfg.sweep.values = parse_double_list(cur, value);
      } else {
        cur.fail("unknown key '" + key + "' in [sweep]");
      }
    }
  }

  // schema-level checks that need the whole file
  Cursor whole{origin, cur.line};
  if (cfg.gen.n <= 0 || cfg.gen.m <= 0 || cfg.gen.p <= 0)
    whole.fail("[gen] must set positive n, m, p");
  if (cfg.gen.d <= 0) whole.fail("[gen] d must be positive");
  if (cfg.gen.mu < 0.0) whole.fail("[gen] mu must be nonnegative");
  if (!(cfg.gen.xi >= 1.0)) whole.fail("[gen] xi must be >= 1");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace spca
