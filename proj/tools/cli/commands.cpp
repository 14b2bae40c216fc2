#include "cli/commands.hpp"

#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include <robust_merton/asymptotics.hpp>

#include "cli/csv.hpp"
#include "cli/problem_spec.hpp"
#include "cli/verify.hpp"

namespace robust_merton::cli {

namespace {

struct GridOptions {
  double kappa_min = 0.01;
  double kappa_max = 0.5;
  int steps = 50;
  std::string scale = "linear";
};

struct CommonOptions {
  std::string spec;
  std::string output = "-";
  std::optional<double> gamma;
};

std::vector<double> build_grid(const GridOptions& g) {
  if (g.steps < 1) throw Error(ErrorKind::InvalidArgument, "--kappa-steps must be at least 1");
  if (g.kappa_min < 0.0) throw Error(ErrorKind::InvalidArgument, "--kappa-min must be non-negative");
  if (g.steps == 1) return {g.kappa_min};
  if (g.scale == "log") return geometric_grid(g.kappa_min, g.kappa_max, g.steps);
  return linear_grid(g.kappa_min, g.kappa_max, g.steps);
}

void add_grid_flags(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--kappa-min", g.kappa_min, "smallest uncertainty radius")->capture_default_str();
  cmd->add_option("--kappa-max", g.kappa_max, "largest uncertainty radius")->capture_default_str();
  cmd->add_option("--kappa-steps", g.steps, "number of grid points")->capture_default_str();
  cmd->add_option("--scale", g.scale, "grid spacing")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
}

void add_common_flags(CLI::App* cmd, CommonOptions& c, bool with_spec = true) {
  if (with_spec) {
    cmd->add_option("spec", c.spec, "problem spec file, or the name of a bundled spec ('example-8asset')")
        ->required();
  }
  cmd->add_option("-o,--output", c.output, "output path, '-' for stdout")->capture_default_str();
  cmd->add_option("--gamma", c.gamma, "override the risk-aversion parameter from the problem file");
}

RobustProblem load_problem(const CommonOptions& c, std::optional<double> kappa = std::nullopt) {
  ProblemSpec spec = load_problem_spec(c.spec);
  if (c.gamma) spec = spec.with_gamma(*c.gamma);
  if (kappa) spec = spec.with_kappa(*kappa);
  return prepare_problem(spec.market, spec.profile, spec.uncertainty);
}

template <class Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open output file '" + path + "'");
  write(file);
}

nlohmann::ordered_json to_json(const Vector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

std::vector<std::string> sweep_header(int d) {
  std::vector<std::string> h{"kappa", "psi", "psi_over_kappa"};
  for (int i = 1; i <= d; ++i) h.push_back("pi_" + std::to_string(i));
  for (int i = 1; i <= d; ++i) h.push_back("mu_" + std::to_string(i));
  for (const char* f : {"value", "ce", "dist_to_limit"}) h.emplace_back(f);
  return h;
}

std::vector<std::string> metrics_header() {
  return {"kappa", "coa", "rdr", "ce_nu_hat", "ce_nu_star", "ce_mustar_star", "ce_mustar_hat"};
}

void write_sweep_csv(std::ostream& out, const RobustProblem& problem, std::span<const double> kappas) {
  const int d = problem.uncertainty.d();
  const Vector limit = limit_strategy(problem.uncertainty.shape(), problem.profile.h());
  write_csv_row(out, sweep_header(d));
  for (double kappa : kappas) {
    const RobustSolution sol = solve_robust(problem.with_kappa(kappa));
    std::vector<std::string> row{format_number(kappa)};
    row.push_back(sol.psi ? format_number(*sol.psi) : std::string());
    row.push_back(sol.psi ? format_number(*sol.psi / kappa) : std::string());
    for (int i = 0; i < d; ++i) row.push_back(format_number(sol.pi_star(i)));
    for (int i = 0; i < d; ++i) row.push_back(format_number(sol.mu_star(i)));
    row.push_back(format_number(sol.value));
    row.push_back(format_number(sol.ce));
    row.push_back(format_number((sol.pi_star - limit).norm()));
    write_csv_row(out, row);
  }
}

void write_metrics_csv(std::ostream& out, const RobustProblem& problem, std::span<const double> kappas,
                       bool utility_differences) {
  const MetricScale scale = utility_differences ? MetricScale::ExpectedUtility : MetricScale::CertaintyEquivalent;
  write_csv_row(out, metrics_header());
  for (double kappa : kappas) {
    const RobustnessReport rep = compute_coa_rdr(problem.with_kappa(kappa), scale);
    write_csv_row(out, {format_number(kappa), format_number(rep.coa), format_number(rep.rdr),
                        format_number(rep.ce_nu_hat), format_number(rep.ce_nu_star),
                        format_number(rep.ce_mustar_star), format_number(rep.ce_mustar_hat)});
  }
}

void write_solution_json(std::ostream& out, const RobustProblem& problem, const RobustSolution& sol) {
  nlohmann::ordered_json j;
  j["kappa"] = sol.kappa;
  j["gamma"] = sol.gamma;
  j["h"] = sol.h;
  j["psi"] = sol.psi ? nlohmann::ordered_json(*sol.psi) : nlohmann::ordered_json(nullptr);
  j["psi_over_kappa"] =
      sol.psi ? nlohmann::ordered_json(*sol.psi / sol.kappa) : nlohmann::ordered_json(nullptr);
  j["pi_star"] = to_json(sol.pi_star);
  j["mu_star"] = to_json(sol.mu_star);
  j["rho_star"] = sol.rho_star ? to_json(*sol.rho_star) : nlohmann::ordered_json(nullptr);
  j["value"] = sol.value;
  j["ce"] = sol.ce;
  j["dist_to_limit"] = (sol.pi_star - limit_strategy(problem.uncertainty.shape(), problem.profile.h())).norm();
  j["robust"] = sol.psi.has_value();
  out << j.dump(2) << '\n';
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust constrained portfolio optimisation under ellipsoidal drift uncertainty",
               "robust-merton"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::optional<double> solve_kappa;
  auto* solve = app.add_subcommand("solve", "solve one instance and write a JSON record");
  add_common_flags(solve, solve_opts);
  solve->add_option("--kappa", solve_kappa, "override the uncertainty radius from the problem file");

  CommonOptions sweep_opts;
  GridOptions sweep_grid{1e-2, 1e8, 41, "log"};
  auto* sweep = app.add_subcommand("sweep", "solve over a kappa grid and write CSV");
  add_common_flags(sweep, sweep_opts);
  add_grid_flags(sweep, sweep_grid);

  CommonOptions metrics_opts;
  GridOptions metrics_grid{1e-2, 2.0, 40, "log"};
  bool eu_difference = false;
  auto* metrics = app.add_subcommand("metrics", "cost of ambiguity and reward for robustness over a kappa grid");
  add_common_flags(metrics, metrics_opts);
  add_grid_flags(metrics, metrics_grid);
  metrics->add_flag("--eu-difference", eu_difference,
                    "use expected-utility differences instead of certainty equivalents");

  CommonOptions verify_opts;
  VerifyOptions verify_cfg;
  auto* verify = app.add_subcommand("verify", "run identity, saddle, oracle and Monte Carlo checks");
  add_common_flags(verify, verify_opts);
  verify->add_option("--n-samples", verify_cfg.n_samples, "saddle-point samples")->capture_default_str();
  verify->add_option("--n-paths", verify_cfg.n_paths, "Monte Carlo paths")->capture_default_str();
  verify->add_option("--seed", verify_cfg.seed, "random seed")->capture_default_str();
  verify->add_option("--oracle-grid", verify_cfg.oracle_grid, "brute-force sphere samples")->capture_default_str();
  verify->add_flag("--force-oracle", verify_cfg.force_oracle, "run the brute-force oracle for d > 3");

  CommonOptions example_opts;
  example_opts.spec = std::string(kExample8AssetName);
  GridOptions example_grid{0.01, 0.5, 50, "linear"};
  bool print_spec = false;
  auto* example = app.add_subcommand("example-8asset", "kappa sweep on the bundled 8-asset market");
  add_common_flags(example, example_opts, /*with_spec=*/false);
  add_grid_flags(example, example_grid);
  example->add_flag("--print-spec", print_spec, "print the bundled spec instead of sweeping");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*solve) {
      const RobustProblem problem = load_problem(solve_opts, solve_kappa);
      const RobustSolution sol = solve_robust(problem);
      with_output(solve_opts.output, out, [&](std::ostream& o) { write_solution_json(o, problem, sol); });
    } else if (*sweep) {
      const RobustProblem problem = load_problem(sweep_opts);
      const auto grid = build_grid(sweep_grid);
      with_output(sweep_opts.output, out, [&](std::ostream& o) { write_sweep_csv(o, problem, grid); });
    } else if (*metrics) {
      const RobustProblem problem = load_problem(metrics_opts);
      const auto grid = build_grid(metrics_grid);
      with_output(metrics_opts.output, out,
                  [&](std::ostream& o) { write_metrics_csv(o, problem, grid, eu_difference); });
    } else if (*verify) {
      const RobustProblem problem = load_problem(verify_opts);
      const auto checks = run_verification(problem, verify_cfg);
      with_output(verify_opts.output, out, [&](std::ostream& o) { print_check_table(o, checks); });
      bool all_ok = true;
      for (const auto& c : checks) {
        if (!c.passed) {
          err << "verification failed: " << c.name << '\n';
          all_ok = false;
        }
      }
      return all_ok ? kExitOk : kExitVerificationFailed;
    } else if (*example) {
      if (print_spec) {
        with_output(example_opts.output, out, [&](std::ostream& o) { o << bundled_spec_text(kExample8AssetName); });
        return kExitOk;
      }
      const RobustProblem problem = load_problem(example_opts);
      const auto grid = build_grid(example_grid);
      with_output(example_opts.output, out, [&](std::ostream& o) { write_sweep_csv(o, problem, grid); });
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.kind()) ? kExitInvalidInput : kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitOk;
}

}  // namespace robust_merton::cli
