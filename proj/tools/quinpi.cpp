// Command-line front end: run a case, a convergence study, or compute
// error norms of a stored field.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "quinpi/config.hpp"
#include "quinpi/errors.hpp"
#include "quinpi/output.hpp"
#include "quinpi/simulation.hpp"

using namespace quinpi;

namespace {

struct Overrides {
  std::string config;
  std::optional<int> grid;
  std::optional<double> gamma;
  std::optional<std::string> mode;
  std::optional<double> courant;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> test_case;
  bool verbose = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  app->add_option("--case", o.test_case, "test case id (overrides [case] id)");
  app->add_option("--grid", o.grid, "nx for cartesian meshes, refinement level for triangles");
  app->add_option("--gamma-threshold", o.gamma, "entropy-production threshold");
  app->add_option("--mode", o.mode, "time-step mode")->check(CLI::IsMember({"stab", "acc", "stability", "accuracy"}));
  app->add_option("--courant", o.courant, "Courant number of the selected mode");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--format", o.format, "field output format")->check(CLI::IsMember({"csv", "vtk", "both"}));
  app->add_flag("-v,--verbose", o.verbose, "per-step log on stderr");
}

SimulationConfig resolve(const Overrides& o) {
  SimulationConfig cfg = o.config.empty() ? SimulationConfig{} : load_config(o.config);
  if (o.test_case) cfg.test_case = *o.test_case;
  if (o.grid) {
    if (cfg.mesh.kind == "triangles")
      cfg.mesh.refinements = *o.grid;
    else
      cfg.mesh.nx = *o.grid;
  }
  if (o.gamma) cfg.limiter_threshold = *o.gamma;
  if (o.mode) cfg.timestep.mode = timestep_mode_from_string(*o.mode);
  if (o.courant) cfg.timestep.courant = *o.courant;
  if (o.out) cfg.output.dir = *o.out;
  if (o.format) cfg.output.format = *o.format;
  if (o.verbose) cfg.verbose = true;
  validate(cfg);
  return cfg;
}

int cmd_run(const Overrides& o) {
  SimulationConfig cfg = resolve(o);
  Simulation sim(cfg);
  sim.run();
  int rejections = 0;
  for (const StepDiagnostics& d : sim.diagnostics()) rejections += d.rejections;
  std::cout << "case " << cfg.test_case << ": " << sim.mesh().num_cells() << " cells, " << sim.steps()
            << " steps, t = " << format_number(sim.time()) << ", rejections " << rejections << '\n';
  if (sim.has_exact()) {
    const ErrorNorms e = error_norms(sim.mesh(), sim.state(), sim.exact_state(sim.time()), 0);
    std::cout << "density error L1 " << format_number(e.l1) << " Linf " << format_number(e.linf) << '\n';
  }
  // Flows that start at rest have no meaningful ratio.
  if (kinetic_energy(sim.mesh(), sim.model(), sim.initial_state()) > 0.0)
    std::cout << "kinetic energy ratio "
              << format_number(kinetic_energy_ratio(sim.mesh(), sim.model(), sim.state(), sim.initial_state())) << '\n';
  return 0;
}

int cmd_convergence(const Overrides& o, const std::vector<int>& grids, const std::string& table) {
  SimulationConfig cfg = resolve(o);
  const std::string dir = cfg.output.dir;
  cfg.output.dir.clear();  // per-grid field output would overwrite itself
  const std::vector<ConvergenceRow> rows = convergence_study(cfg, grids);
  write_convergence_csv(std::cout, rows);
  if (!table.empty()) {
    std::ofstream out(table);
    if (!out) throw std::runtime_error("cannot write '" + table + "'");
    write_convergence_csv(out, rows);
  } else if (!dir.empty()) {
    std::ofstream out(dir + "/convergence.csv");
    write_convergence_csv(out, rows);
  }
  return 0;
}

int cmd_norms(const Overrides& o, const std::string& field, const std::string& reference, double time) {
  SimulationConfig cfg = resolve(o);
  cfg.output.dir.clear();
  Simulation sim(cfg);
  const Field u = read_field_csv(field);
  Field ref;
  if (!reference.empty()) {
    ref = read_field_csv(reference);
  } else {
    if (!sim.has_exact()) throw ConfigError("case '" + cfg.test_case + "' has no exact solution; pass --reference");
    ref = sim.exact_state(std::isnan(time) ? sim.t_final() : time);
  }
  const char* names[4] = {"rho", "rho_u", "rho_v", "E"};
  std::cout << "component,L1,Linf\n";
  for (int c = 0; c < 4; ++c) {
    const ErrorNorms e = error_norms(sim.mesh(), u, ref, c);
    std::cout << names[c] << ',' << format_number(e.l1) << ',' << format_number(e.linf) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit finite-volume solver for the low-Mach Euler equations"};
  app.require_subcommand(1);

  Overrides run_opts;
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  add_common(run, run_opts);

  Overrides conv_opts;
  std::vector<int> grids;
  std::string table;
  CLI::App* conv = app.add_subcommand("convergence", "run a grid sequence against the exact solution");
  add_common(conv, conv_opts);
  conv->add_option("--grids", grids, "grid list (nx values or refinement levels)")->required()->delimiter(',');
  conv->add_option("--table", table, "also write the table to this file");

  Overrides norm_opts;
  std::string field, reference;
  double time = std::nan("");
  CLI::App* norms = app.add_subcommand("norms", "error norms of a field CSV");
  add_common(norms, norm_opts);
  norms->add_option("--field", field, "field CSV to evaluate")->required()->check(CLI::ExistingFile);
  norms->add_option("--reference", reference, "reference field CSV (default: exact solution)")->check(CLI::ExistingFile);
  norms->add_option("--time", time, "time of the exact solution (default: t_final)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*conv) return cmd_convergence(conv_opts, grids, table);
    if (*norms) return cmd_norms(norm_opts, field, reference, time);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
