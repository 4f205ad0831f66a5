#pragma once

#include <string>
#include <vector>

namespace trk::acceptance {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double ms = 0.0;
};

// Runs every acceptance criterion (optionally those whose name contains
// `filter`) and returns one result per criterion.
std::vector<CriterionResult> run_all(int threads = 1, const std::string& filter = "");

}  // namespace trk::acceptance
