#pragma once

#include <string>
#include <vector>

namespace spca::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // filled on failure
};

// Runs every check whose name contains `filter` (all when empty), in a fixed
// order with fixed seeds.  Output-free; the CLI does the printing.
std::vector<CheckResult> run_checks(const std::string& filter = "");

}  // namespace spca::verify
