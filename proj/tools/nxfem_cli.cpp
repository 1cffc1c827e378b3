// Command-line driver: convergence studies, single solves with field dumps,
// manufactured-data verification and the property suite.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nxfem/study.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<int> example;
  std::optional<int> n;
  std::optional<double> ctilde;
  std::optional<double> nu;
  std::optional<double> theta;
  std::optional<double> tol;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "key = value configuration file");
  cmd->add_option("--example", o.example, "benchmark id (1, 2 or 3)");
  cmd->add_option("--n", o.n, "mesh size N (single solve, or a one-mesh study)");
  cmd->add_option("--ctilde", o.ctilde, "Nitsche stabilization constant");
  cmd->add_option("--nu", o.nu, "control cost");
  cmd->add_option("--theta", o.theta, "fixed-point relaxation in (0, 1]");
  cmd->add_option("--tol", o.tol, "fixed-point tolerance");
  cmd->add_option("--out", o.out, "output directory");
}

nxfem::StudyConfig build_config(const Overrides& o) {
  nxfem::StudyConfig c;
  if (!o.config.empty()) c = nxfem::load_config(o.config);
  if (o.example) c.example = *o.example;
  if (o.n) c.n = *o.n;
  if (o.ctilde) c.problem.ctilde = *o.ctilde;
  if (o.nu) c.problem.nu = *o.nu;
  if (o.theta) c.theta = *o.theta;
  if (o.tol) c.tol = *o.tol;
  if (o.out) c.out = *o.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unfitted Nitsche-XFEM solver for elliptic interface optimal control"};
  app.require_subcommand(1);

  Overrides study_o, solve_o, verify_o, props_o;
  CLI::App* study = app.add_subcommand("study", "convergence study over the configured meshes");
  CLI::App* solve = app.add_subcommand("solve", "single solve with a field dump at quadrature points");
  CLI::App* verify = app.add_subcommand("verify", "check the manufactured data of an example");
  CLI::App* props = app.add_subcommand("props", "run the discretization property suite");
  add_common(study, study_o);
  add_common(solve, solve_o);
  add_common(verify, verify_o);
  add_common(props, props_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? nxfem::kExitOk : nxfem::kExitConfig;
  }

  try {
    if (study->parsed()) {
      nxfem::StudyConfig c = build_config(study_o);
      if (study_o.n) c.meshes = {*study_o.n};
      const nxfem::StudyReport report = nxfem::run_study(c, &std::cerr);
      std::cout << report.markdown;
      std::cerr << "wrote " << (c.out / "study.csv").string() << "\n";
      return report.exit_code;
    }
    if (solve->parsed()) {
      const nxfem::StudyConfig c = build_config(solve_o);
      int n = 0;
      if (c.n) n = *c.n;
      else if (!c.meshes.empty()) n = c.meshes.back();
      else throw nxfem::ConfigError("solve: no mesh size (use --n or n = ...)");
      const nxfem::SolveDump dump = nxfem::run_solve(c, n, &std::cerr);
      if (dump.exit_code == nxfem::kExitOk || !dump.csv.empty()) {
        std::cerr << "wrote " << (c.out / ("solve_N" + std::to_string(n) + ".csv")).string() << "\n";
      }
      return dump.exit_code;
    }
    if (verify->parsed()) return nxfem::run_verify(build_config(verify_o), std::cout);
    if (props->parsed()) return nxfem::run_props(build_config(props_o), std::cout);
  } catch (const nxfem::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nxfem::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nxfem::kExitSolver;
  }
  return nxfem::kExitOk;
}
