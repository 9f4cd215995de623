#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcrd {

struct ValidateOptions {
  bool quick = false;          // reduced grids, smaller Monte Carlo budgets
  double gupper_scale = 1.0;   // test hook: scales the shell upper bound
  std::uint64_t seed = 1;
  int workers = 1;
};

struct InvariantResult {
  std::string name;
  std::string grid;    // what was swept
  double worst_slack;  // smallest margin seen; negative means violated
  bool pass;
};

// Runs every invariant suite on built-in reference sources. Each suite
// reports its worst slack: the margin left after folding in the suite's
// tolerance, so pass == (worst_slack >= 0).
std::vector<InvariantResult> run_validation(const ValidateOptions& opts);

bool validation_passed(const std::vector<InvariantResult>& results);

std::string render_validation_report(const std::vector<InvariantResult>& results);

}  // namespace gcrd
