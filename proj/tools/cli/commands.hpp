#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <robust_merton/solver.hpp>

namespace robust_merton::cli {

/// Exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInvalidInput = 2,
  kExitNumericalFailure = 3,
};

/// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::vector<std::string> sweep_header(int d);
std::vector<std::string> metrics_header();

void write_sweep_csv(std::ostream& out, const RobustProblem& problem, std::span<const double> kappas);
void write_metrics_csv(std::ostream& out, const RobustProblem& problem, std::span<const double> kappas,
                       bool utility_differences);
void write_solution_json(std::ostream& out, const RobustProblem& problem, const RobustSolution& solution);

}  // namespace robust_merton::cli
