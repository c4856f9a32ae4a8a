#pragma once

#include <string>
#include <vector>

#include "spca/datagen.hpp"
#include "spca/dssal1.hpp"
#include "spca/manpg.hpp"
#include "spca/types.hpp"

namespace spca {

enum class Algo { dssal1, manpg, manpg_ada };

const char* algo_name(Algo a);

// Sweep description for the compare command: exactly one generator parameter
// varies, everything else is fixed.
struct SweepSpec {
  std::string param;  // one of n, p, mu, d
  std::vector<double> values;
};

// Full experiment description parsed from a config file.  Every random
// choice in a run is traceable to gen.seed.
struct RunConfig {
  GenSpec gen;
  Algo algo = Algo::dssal1;
  DriverConfig driver;
  ManpgConfig manpg;
  std::string out_dir = "out";
  bool attack = false;
  int warmstart_iters = 500;
  SweepSpec sweep;
};

// INI-style file: top-level keys, then [gen], [driver], [manpg], [outputs],
// [sweep] sections.  '#' and ';' start comments.  Unknown keys or sections
// are errors, reported with their line number.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace spca
