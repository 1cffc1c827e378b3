#include "nxfem/study.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "nxfem/properties.hpp"

namespace nxfem {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

std::vector<int> parse_meshes(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(spaced);
  std::vector<int> out;
  std::string item;
  while (in >> item) out.push_back(parse_int("meshes", item));
  return out;
}

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string format_order(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::vector<Norm> selected_norms(TableKind kind) {
  switch (kind) {
    case TableKind::L2: return {Norm::L2};
    case TableKind::H1: return {Norm::H1};
    case TableKind::Energy: return {Norm::Energy};
    case TableKind::All: break;
  }
  return {Norm::L2, Norm::H1, Norm::Energy};
}

std::string norm_heading(Norm n) {
  switch (n) {
    case Norm::L2: return "L2 norm";
    case Norm::H1: return "H1 seminorm";
    case Norm::Energy: return "mesh-dependent energy norm";
  }
  return "";
}

constexpr Quantity kQuantities[] = {Quantity::U, Quantity::Y, Quantity::P};

bool measured(const ProblemSpec& spec, Quantity q, Norm n) {
  return !(q == Quantity::U && n == Norm::Energy && spec.bounds.bounded());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write " + path.string());
}

struct SolveOutcome {
  std::unique_ptr<Discretization> disc;
  std::optional<OcpSolution> solution;
  std::string failure;
};

SolveOutcome solve_mesh(const StudyConfig& config, const ProblemSpec& spec, int n) {
  SolveOutcome out;
  try {
    out.disc = std::make_unique<Discretization>(spec, n, solver_options(config));
    OcpSolution sol = solve_optimal_control(*out.disc, fixed_point_options(config));
    if (!sol.converged) {
      out.failure = "fixed point not converged after " + std::to_string(sol.iterations) +
                    " iterations (change " + format_sci(sol.control_change) + ")";
    }
    out.solution.emplace(std::move(sol));
  } catch (const NonConvergenceError& e) {
    out.failure = std::string("linear solver: ") + e.what();
  } catch (const BreakdownError& e) {
    out.failure = std::string("linear solver: ") + e.what();
  } catch (const DataEvaluationError& e) {
    out.failure = std::string("data: ") + e.what();
  }
  return out;
}

}  // namespace

StudyConfig parse_config(std::istream& in) {
  StudyConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("config: repeated key '" + key + "'");
    if (value.empty() && key != "meshes") throw ConfigError("config: empty value for '" + key + "'");

    if (key == "example") c.example = parse_int(key, value);
    else if (key == "meshes") c.meshes = parse_meshes(value);
    else if (key == "n") c.n = parse_int(key, value);
    else if (key == "nu") c.problem.nu = parse_double(key, value);
    else if (key == "ctilde") c.problem.ctilde = parse_double(key, value);
    else if (key == "alpha1") c.problem.alpha1 = parse_double(key, value);
    else if (key == "alpha2") c.problem.alpha2 = parse_double(key, value);
    else if (key == "slope") c.problem.slope = parse_double(key, value);
    else if (key == "intercept") c.problem.intercept = parse_double(key, value);
    else if (key == "radius") c.problem.radius = parse_double(key, value);
    else if (key == "lower") c.problem.lower = parse_double(key, value);
    else if (key == "upper") c.problem.upper = parse_double(key, value);
    else if (key == "theta") c.theta = parse_double(key, value);
    else if (key == "tol") c.tol = parse_double(key, value);
    else if (key == "max_iter") c.max_iter = parse_int(key, value);
    else if (key == "solver_tol") c.solver_tol = parse_double(key, value);
    else if (key == "inner_tol") c.inner_tol = parse_double(key, value);
    else if (key == "error_degree") c.error_degree = parse_int(key, value);
    else if (key == "out") c.out = value;
    else if (key == "norm") {
      if (value == "auto") c.norm = NormMode::Auto;
      else if (value == "relative") c.norm = NormMode::Relative;
      else if (value == "absolute") c.norm = NormMode::Absolute;
      else throw ConfigError("config: norm must be auto, relative or absolute");
    } else if (key == "table") {
      if (value == "l2") c.table = TableKind::L2;
      else if (value == "h1") c.table = TableKind::H1;
      else if (value == "energy") c.table = TableKind::Energy;
      else if (value == "all") c.table = TableKind::All;
      else throw ConfigError("config: table must be l2, h1, energy or all");
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in);
}

void validate(const StudyConfig& c, bool for_study) {
  if (for_study && !c.example) throw ConfigError("config: example is required");
  if (for_study && c.meshes.empty() && !c.n) throw ConfigError("config: mesh list is empty");
  for (std::size_t i = 0; i < c.meshes.size(); ++i) {
    if (c.meshes[i] < 1) throw ConfigError("config: mesh sizes must be positive");
    if (i > 0 && c.meshes[i] <= c.meshes[i - 1]) {
      throw ConfigError("config: mesh list must be strictly increasing");
    }
  }
  if (c.n && *c.n < 1) throw ConfigError("config: n must be positive");
  if (!(c.tol > 0.0) || !(c.solver_tol > 0.0) || !(c.inner_tol > 0.0)) {
    throw ConfigError("config: tolerances must be positive");
  }
  if (!(c.theta > 0.0 && c.theta <= 1.0)) throw ConfigError("config: theta must lie in (0, 1]");
  if (c.max_iter < 1) throw ConfigError("config: max_iter must be positive");
  if (c.error_degree != 2 && c.error_degree != 4 && c.error_degree != 6) {
    throw ConfigError("config: error_degree must be 2, 4 or 6");
  }
  if (c.example) {
    try {
      (void)make_example(*c.example, c.problem);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
}

ProblemSpec make_problem(const StudyConfig& config) {
  if (!config.example) throw ConfigError("config: example is required");
  try {
    return make_example(*config.example, config.problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SolverOptions solver_options(const StudyConfig& config) {
  SolverOptions o;
  o.rel_tol = config.solver_tol;
  o.inner_tol = config.inner_tol;
  return o;
}

FixedPointOptions fixed_point_options(const StudyConfig& config) {
  FixedPointOptions o;
  o.tol = config.tol;
  o.max_iter = config.max_iter;
  o.theta = config.theta;
  return o;
}

StudyReport run_study(const StudyConfig& config, std::ostream* log, bool write_files) {
  validate(config);
  const ProblemSpec spec = make_problem(config);
  std::vector<int> meshes = config.meshes;
  if (meshes.empty()) meshes.push_back(*config.n);

  StudyReport report;
  report.relative = config.norm == NormMode::Relative ||
                    (config.norm == NormMode::Auto && spec.relative_errors);

  for (int n : meshes) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.n = n;
    SolveOutcome outcome = solve_mesh(config, spec, n);
    if (outcome.disc) row.h = outcome.disc->mesh().h();
    if (outcome.solution) row.iterations = outcome.solution->iterations;
    if (outcome.failure.empty()) {
      row.errors = measure_errors(*outcome.disc, *outcome.solution, config.error_degree);
      row.ok = true;
      row.status = "ok";
    } else {
      row.status = "failed: " + outcome.failure;
      report.exit_code = kExitSolver;
    }
    if (log) {
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2fs", seconds);
      *log << "N=" << n << " iterations=" << row.iterations << " time=" << buf << " "
           << row.status << "\n";
    }
    report.rows.push_back(std::move(row));
  }

  auto value = [&](const ConvergenceRow& row, Quantity q, Norm n) {
    const ErrorMeasure& m = row.errors.at(q, n);
    return report.relative ? m.relative() : m.absolute;
  };
  auto order = [&](std::size_t i, Quantity q, Norm n) -> std::optional<double> {
    if (i == 0 || !report.rows[i].ok || !report.rows[i - 1].ok) return std::nullopt;
    const double e[] = {value(report.rows[i - 1], q, n), value(report.rows[i], q, n)};
    const double h[] = {report.rows[i - 1].h, report.rows[i].h};
    return eoc(e, h)[1];
  };

  const std::vector<Norm> norms = selected_norms(config.table);
  std::ostringstream csv;
  csv << "N,h";
  for (Norm n : norms) {
    for (Quantity q : kQuantities) {
      const std::string name = to_string(q) + "_" + to_string(n);
      csv << "," << name << "," << name << "_eoc";
    }
  }
  csv << ",iterations,status\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ConvergenceRow& row = report.rows[i];
    csv << row.n << "," << format_sci(row.h);
    for (Norm n : norms) {
      for (Quantity q : kQuantities) {
        if (!row.ok || !measured(spec, q, n)) {
          csv << ",,";
          continue;
        }
        csv << "," << format_sci(value(row, q, n)) << "," << format_order(order(i, q, n));
      }
    }
    csv << "," << row.iterations << "," << row.status << "\n";
  }
  report.csv = csv.str();

  std::ostringstream md;
  md << "# Example " << *config.example << ": " << spec.name << "\n";
  for (Norm n : norms) {
    md << "\n" << (report.relative ? "Relative" : "Absolute") << " errors, "
       << norm_heading(n) << "\n\n| N |";
    for (Quantity q : kQuantities) md << " " << to_string(q) << " | order |";
    md << "\n|---|";
    for (std::size_t k = 0; k < 3; ++k) md << "---|---|";
    md << "\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const ConvergenceRow& row = report.rows[i];
      md << "| " << row.n << " |";
      for (Quantity q : kQuantities) {
        if (!row.ok) {
          md << " failed | |";
        } else if (!measured(spec, q, n)) {
          md << " - | |";
        } else {
          md << " " << format_sci(value(row, q, n)) << " | " << format_order(order(i, q, n)) << " |";
        }
      }
      md << "\n";
    }
  }
  report.markdown = md.str();

  if (write_files) {
    write_file(config.out / "study.csv", report.csv);
    write_file(config.out / "study.md", report.markdown);
  }
  return report;
}

SolveDump run_solve(const StudyConfig& config, int n, std::ostream* log, bool write_files) {
  StudyConfig checked = config;
  if (checked.meshes.empty()) checked.n = n;
  validate(checked);
  if (n < 1) throw ConfigError("config: n must be positive");
  const ProblemSpec spec = make_problem(config);

  SolveDump dump;
  SolveOutcome outcome = solve_mesh(config, spec, n);
  if (!outcome.solution) {
    if (log) *log << "N=" << n << " failed: " << outcome.failure << "\n";
    dump.exit_code = kExitSolver;
    return dump;
  }
  if (!outcome.failure.empty()) {
    if (log) *log << "N=" << n << " failed: " << outcome.failure << "\n";
    dump.exit_code = kExitSolver;
  }

  const Discretization& disc = *outcome.disc;
  const OcpSolution& sol = *outcome.solution;
  const QuadratureCache& cache = disc.quadrature();
  const ControlBounds& b = spec.bounds;
  auto active = [&b](double u) { return u <= b.lower ? -1 : (u >= b.upper ? 1 : 0); };

  std::ostringstream csv;
  csv << "x1,x2,side,y_h,p_h,u_h,y,p,u,active_h,active\n";
  char buf[256];
  for (std::size_t i = 0; i < cache.size(); ++i) {
    const VolumePoint& q = cache.point(i);
    const int t = cache.element_of(i);
    const double yh = sol.y.value(t, q.side, q.bary);
    const double ph = sol.p.value(t, q.side, q.bary);
    const double uh = sol.control.value(t, q.side, q.bary);
    const double u = spec.u.value(q.x, q.side);
    dump.max_control_error = std::max(dump.max_control_error, std::abs(uh - u));
    std::snprintf(buf, sizeof buf, "%.10e,%.10e,%d,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%d,%d\n",
                  q.x.x, q.x.y, q.side, yh, ph, uh, spec.y.value(q.x, q.side),
                  spec.p.value(q.x, q.side), u, active(uh), active(u));
    csv << buf;
  }
  dump.csv = csv.str();
  if (log) {
    *log << "N=" << n << " points=" << cache.size() << " iterations=" << sol.iterations
         << " max|u_h - u|=" << format_sci(dump.max_control_error) << "\n";
  }
  if (write_files) write_file(config.out / ("solve_N" + std::to_string(n) + ".csv"), dump.csv);
  return dump;
}

namespace {

int print_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  bool all = true;
  for (const CheckResult& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (c.worst > 0.0) out << "  worst=" << format_sci(c.worst);
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
    all = all && c.passed;
  }
  return all ? kExitOk : kExitCheck;
}

}  // namespace

int run_verify(const StudyConfig& config, std::ostream& out) {
  validate(config, false);
  const ManufacturedReport report = verify_manufactured(make_problem(config));
  return print_checks(report.checks, out);
}

int run_props(const StudyConfig& config, std::ostream& out) {
  validate(config, false);
  PropertyOptions options;
  options.ctilde = config.problem.ctilde;
  options.example = config.example.value_or(0);
  return print_checks(run_property_suite(options), out);
}

}  // namespace nxfem
