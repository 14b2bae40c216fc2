#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <robust_merton/solver.hpp>

namespace robust_merton::cli {

struct VerifyOptions {
  int n_samples = 10000;
  int n_paths = 200000;
  std::uint64_t seed = 1;
  bool force_oracle = false;
  int oracle_grid = 100000;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  std::string detail;
};

/// Identity, spectral, psi-equation, dual-representation, saddle-point,
/// brute-force (d <= 3 unless forced) and Monte Carlo checks on one instance.
std::vector<CheckResult> run_verification(const RobustProblem& problem, const VerifyOptions& options);

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace robust_merton::cli
