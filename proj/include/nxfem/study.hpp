#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nxfem/analysis.hpp"
#include "nxfem/optctl.hpp"
#include "nxfem/problems.hpp"

namespace nxfem {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitCheck = 3 };

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class NormMode { Auto, Relative, Absolute };
enum class TableKind { L2, H1, Energy, All };

struct StudyConfig {
  /// Unset is only allowed for the property suite, which then covers all examples.
  std::optional<int> example;
  ExampleOverrides problem;
  std::vector<int> meshes;
  /// Mesh of a single solve (solve/dump); defaults to the last study mesh.
  std::optional<int> n;

  double theta = 1.0;
  double tol = 1e-10;
  int max_iter = 100;
  double solver_tol = 1e-12;
  double inner_tol = 1e-13;
  int error_degree = 4;

  NormMode norm = NormMode::Auto;
  TableKind table = TableKind::All;
  std::filesystem::path out = "out";
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// numbers and repeated keys throw ConfigError. The result is not validated.
StudyConfig parse_config(std::istream& in);
StudyConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError unless the mesh list is non-empty and strictly
/// increasing, tolerances are positive and the problem parameters are valid.
/// With for_study unset, the example and the mesh list may be missing.
void validate(const StudyConfig& config, bool for_study = true);

ProblemSpec make_problem(const StudyConfig& config);
SolverOptions solver_options(const StudyConfig& config);
FixedPointOptions fixed_point_options(const StudyConfig& config);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  bool ok = false;
  std::string status;
  int iterations = 0;
  ErrorReport errors;
};

struct StudyReport {
  std::vector<ConvergenceRow> rows;
  bool relative = true;
  std::string csv;
  std::string markdown;
  int exit_code = kExitOk;
};

/// Solves on every mesh of the config and tabulates errors with EOCs. A mesh
/// whose solve fails is marked and the remaining meshes are still run. Writes
/// study.csv and study.md into config.out when write_files is set.
StudyReport run_study(const StudyConfig& config, std::ostream* log = nullptr,
                      bool write_files = true);

struct SolveDump {
  std::string csv;
  int exit_code = kExitOk;
  double max_control_error = 0.0;
};

/// Field values at every volume quadrature point of mesh n. active_h is -1/+1
/// where u_h sits on the lower/upper bound, 0 elsewhere; active is the same
/// for the exact control.
SolveDump run_solve(const StudyConfig& config, int n, std::ostream* log = nullptr,
                    bool write_files = true);

/// Runs the manufactured-data checks; exit code 0 iff all pass.
int run_verify(const StudyConfig& config, std::ostream& out);

/// Runs the property suite (restricted to the config example when one is set
/// and with its C override); exit code 0 iff all pass.
int run_props(const StudyConfig& config, std::ostream& out);

}  // namespace nxfem
