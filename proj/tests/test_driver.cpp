#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "quinpi/config.hpp"
#include "quinpi/errors.hpp"
#include "quinpi/output.hpp"
#include "quinpi/simulation.hpp"

using namespace quinpi;
namespace fs = std::filesystem;

namespace {

SimulationConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_text(const SimulationConfig& cfg) {
  std::ostringstream out;
  write_config(out, cfg);
  return out.str();
}

SimulationConfig small(const std::string& id, int nx, int steps) {
  SimulationConfig cfg;
  cfg.test_case = id;
  cfg.mesh.nx = nx;
  cfg.max_steps = steps;
  return cfg;
}

std::string field_csv(const Simulation& sim) {
  std::ostringstream out;
  write_field_csv(out, sim.mesh(), sim.model(), sim.state(), sim.entropy_production(), sim.flags());
  return out.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("quinpi_test_" + name);
  fs::remove_all(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QUINPI_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const SimulationConfig cfg = parse(
      "[case]\nid = radial_sod\nt_final = 0.1\n"
      "[mesh]\nnx = 20\n"
      "[time]\nmode = stab\ncourant = 3\n"
      "[limiter]\nthreshold = 0.05\n"
      "[corrector]\npreconditioner = lu_compact\nmax_iter = 7\n"
      "[debug]\nfail_attempts = 1,4\n");
  CHECK(cfg.test_case == "radial_sod");
  CHECK(cfg.t_final == 0.1);
  CHECK(cfg.mesh.nx == 20);
  CHECK(cfg.timestep.mode == TimestepMode::stability);
  CHECK(cfg.timestep.courant == 3.0);
  CHECK(cfg.limiter_threshold == 0.05);
  CHECK(cfg.stepper.corrector.linear.preconditioner == PreconditionerKind::lu_compact);
  CHECK(cfg.stepper.corrector.max_iter == 7);
  CHECK(cfg.stepper.predictor.max_iter == 50);
  CHECK(cfg.stepper.fail_attempts == std::vector<int>{1, 4});

  SUBCASE("unknown keys and sections are errors") {
    try {
      parse("[mesh]\nnz = 3\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("mesh.nz") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("[meshes]\nnx = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("nx = 3\n"), ConfigError);
  }
  SUBCASE("malformed values") {
    CHECK_THROWS_AS(parse("[mesh]\nnx = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("[mesh]\nnx = 3.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("[time]\nmode = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse("[limiter]\nenabled = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("[output]\nformat = png\n"), ConfigError);
    CHECK_THROWS_AS(parse("[time]\ncourant = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[case]\nt_final = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[limiter]\nthreshold = -1\n"), ConfigError);
  }
  SUBCASE("the written config reads back to the same settings") {
    const std::string text = config_text(cfg);
    CHECK(config_text(parse(text)) == text);
    CHECK(text.find("threshold = 0.05") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/quinpi.ini"), ConfigError);
}

TEST_CASE("test case presets") {
  CHECK_THROWS_AS(make_test_case("nope"), ConfigError);
  for (const std::string& id : test_case_ids()) {
    CAPTURE(id);
    const TestCase tc = make_test_case(id);
    const Euler model(tc.euler);
    CHECK(tc.t_final > 0.0);
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; j <= 12; ++j) {
        const Vec2 x{tc.domain.x0 + tc.domain.width() * i / 12.0, tc.domain.y0 + tc.domain.height() * j / 12.0};
        CHECK(model.admissible(model.to_conserved(tc.initial(x)).data()));
      }
  }
  SUBCASE("isentropic vortex: isentropic, radially balanced, periodic in time") {
    const double beta = 5.0, gamma = 1.4;
    for (double r : {0.3, 1.0, 2.0}) {
      // Swirl on top of the uniform advection (1, 1).
      const Primitive w = isentropic_vortex({r, 0.0}, beta, gamma);
      CHECK(w.u == doctest::Approx(1.0));
      CHECK(w.p / std::pow(w.rho, gamma) == doctest::Approx(1.0));
      const double h = 1e-5;
      const double dp = (isentropic_vortex({r + h, 0}, beta, gamma).p - isentropic_vortex({r - h, 0}, beta, gamma).p) / (2 * h);
      CHECK(dp == doctest::Approx(w.rho * (w.v - 1.0) * (w.v - 1.0) / r).epsilon(1e-6));
    }
    const TestCase tc = make_test_case("isentropic_vortex");
    for (Vec2 x : {Vec2{0.3, -1.2}, Vec2{4.9, 4.9}}) {
      CHECK(tc.exact(x, 10.0).rho == doctest::Approx(tc.exact(x, 0.0).rho).epsilon(1e-12));
      CHECK(tc.exact(x, 1.0).rho == doctest::Approx(tc.exact({x.x - 1.0, x.y - 1.0}, 0.0).rho).epsilon(1e-12));
    }
  }
  SUBCASE("gresho vortices are in radial balance") {
    for (double r : {0.05, 0.15, 0.25, 0.33, 0.45}) {
      const double h = 1e-6;
      const double u2 = gresho_c2_velocity(r) * gresho_c2_velocity(r);
      CHECK((gresho_c2_pressure(r + h) - gresho_c2_pressure(r - h)) / (2 * h) == doctest::Approx(u2 / r).epsilon(1e-5));
      const double v2 = gresho_classic_velocity(r) * gresho_classic_velocity(r);
      if (std::abs(r - 0.2) > 1e-3 && std::abs(r - 0.4) > 1e-3)
        CHECK((gresho_classic_pressure(r + h) - gresho_classic_pressure(r - h)) / (2 * h) ==
              doctest::Approx(v2 / r).epsilon(1e-5));
    }
    CHECK(gresho_classic_velocity(0.2) == doctest::Approx(1.0));
    CHECK(gresho_c2_velocity(0.6) == 0.0);
  }
}

TEST_CASE("error norms and energy") {
  const Mesh mesh = build_cartesian_mesh(4, 5, {}, BoundarySpec::all(BoundaryKind::wall));
  Field a(4, mesh.num_cells(), 1.0), b(4, mesh.num_cells(), 1.0);
  CHECK(error_norms(mesh, a, b, 0).l1 == 0.0);
  CHECK(error_norms(mesh, a, b, 0).linf == 0.0);
  for (int i = 0; i < b.n; ++i) b(i, 2) += 0.125;
  const ErrorNorms e = error_norms(mesh, a, b, 2);
  CHECK(e.l1 == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(e.linf == 0.125);
  CHECK_THROWS_AS(error_norms(mesh, a, Field(4, 3), 0), MeshError);

  const Euler low({1.4, 0.1});
  Field u(4, mesh.num_cells());
  for (int i = 0; i < u.n; ++i) {
    const auto w = low.to_conserved({2.0, 3.0, 4.0, 1.0});
    for (int k = 0; k < 4; ++k) u(i, k) = w[k];
  }
  // 1/2 rho |u|^2 eps^2 over unit area.
  CHECK(kinetic_energy(mesh, low, u) == doctest::Approx(0.5 * 2.0 * 25.0 * 0.01));
  CHECK(kinetic_energy_ratio(mesh, low, u, u) == 1.0);
  const std::vector<double> tot = conserved_totals(mesh, u);
  CHECK(tot[0] == doctest::Approx(2.0));
}

TEST_CASE("field output") {
  SUBCASE("CSV round trip is bit-exact") {
    const Mesh mesh = build_cartesian_mesh(3, 4, {}, BoundarySpec::all(BoundaryKind::wall));
    const Euler model;
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    Field u(4, mesh.num_cells());
    for (int i = 0; i < u.n; ++i) {
      const auto w = model.to_conserved({dist(rng), dist(rng) - 1.5, dist(rng) - 1.5, dist(rng)});
      for (int k = 0; k < 4; ++k) u(i, k) = w[k];
    }
    u(0, 3) = 1.0 / 3.0;
    std::stringstream ss;
    write_field_csv(ss, mesh, model, u, std::vector<double>(u.n, 1e-300), std::vector<int>(u.n, 2));
    const Field back = read_field_csv(ss);
    CHECK(back.n == u.n);
    CHECK(back.m == 4);
    CHECK(back.data == u.data);
  }
  SUBCASE("one cell: header plus one row") {
    const Mesh mesh = build_cartesian_mesh(1, 1, {}, BoundarySpec::all(BoundaryKind::wall));
    const Euler model;
    const auto w = model.to_conserved({1, 0, 0, 1});
    Field u(4, 1);
    for (int k = 0; k < 4; ++k) u(0, k) = w[k];
    std::ostringstream out;
    write_field_csv(out, mesh, model, u, {0.0}, {3});
    std::istringstream in(out.str());
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "cell,x,y,rho,rho_u,rho_v,E,u,v,p,entropy_production,order");
    CHECK(lines[1] == "0,0.5,0.5,1,0,0," + format_number(w[3]) + ",0,0," + format_number(model.pressure(w.data())) + ",0,3");
  }
  SUBCASE("VTK cell count") {
    TriangleMeshSpec spec;
    spec.n = 4;
    spec.domain = {0, 1, 0, 1};
    RawTriangulation raw = generate_triangulation(spec);
    MeshAssemblyOptions opts;
    opts.domain = spec.domain;
    opts.classify = side_classifier(spec.domain, BoundarySpec::all(BoundaryKind::wall));
    const Mesh mesh = assemble_mesh(std::move(raw.vertices), std::move(raw.triangles), opts);
    const Euler model;
    Field u(4, mesh.num_cells(), 1.0);
    std::ostringstream out;
    write_vtk(out, mesh, model, u, {}, {});
    const std::string text = out.str();
    const std::string n = std::to_string(mesh.num_cells());
    CHECK(text.rfind("# vtk DataFile Version", 0) == 0);
    CHECK(text.find("\nCELLS " + n + " " + std::to_string(4 * mesh.num_cells()) + "\n") != std::string::npos);
    CHECK(text.find("\nCELL_TYPES " + n + "\n") != std::string::npos);
    CHECK(text.find("\nCELL_DATA " + n + "\n") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(read_field_csv("/nonexistent/field.csv"), doctest::Contains("/nonexistent/field.csv"),
                       std::exception);
}

TEST_CASE("constant states survive the full loop") {
  for (const char* kind : {"cartesian", "triangles"}) {
    CAPTURE(kind);
    SimulationConfig cfg = small("constant", 8, 3);
    cfg.mesh.kind = kind;
    cfg.mesh.tri_n = 6;
    cfg.limiter_threshold = 1e-3;
    Simulation sim(cfg);
    CHECK(kinetic_energy_ratio(sim.mesh(), sim.model(), sim.state(), sim.initial_state()) == 1.0);
    sim.run();
    CHECK(sim.steps() > 0);
    double worst = 0.0;
    for (std::size_t j = 0; j < sim.state().size(); ++j)
      worst = std::max(worst, std::abs(sim.state().data[j] - sim.initial_state().data[j]));
    CHECK(worst < 1e-11);
    for (const StepDiagnostics& d : sim.diagnostics()) CHECK(d.limiter_sweeps == 0);
  }
}

TEST_CASE("runs are deterministic and write their outputs") {
  const fs::path dir = scratch_dir("outputs");
  SimulationConfig cfg = small("isentropic_vortex", 10, 2);
  Simulation a(cfg);
  a.run();
  cfg.output.dir = dir.string();
  cfg.output.format = "both";
  Simulation b(cfg);
  b.run();
  CHECK(field_csv(a) == field_csv(b));
  for (const char* f : {"config.ini", "field_0000.csv", "field_0000.vtk", "final.csv", "final.vtk", "diagnostics.csv"})
    CHECK(fs::exists(dir / f));
  std::ifstream final_csv(dir / "final.csv");
  std::stringstream text;
  text << final_csv.rdbuf();
  CHECK(text.str() == field_csv(a));
  // The echoed config reproduces the run.
  const SimulationConfig echoed = load_config((dir / "config.ini").string());
  CHECK(echoed.mesh.nx == 10);
  CHECK(std::isinf(echoed.limiter_threshold));
  std::ifstream diag(dir / "diagnostics.csv");
  int lines = 0;
  for (std::string l; std::getline(diag, l);) ++lines;
  CHECK(lines == 3);
  for (const StepDiagnostics& d : a.diagnostics()) {
    CHECK(d.dt > 0.0);
    CHECK(d.c_as == doctest::Approx(d.dt / d.dt_stab));
    CHECK(d.corrector_newton[0] >= 1);
  }
  fs::remove_all(dir);
}

TEST_CASE("radial sod is symmetric under x <-> y") {
  SimulationConfig cfg = small("radial_sod", 16, 4);
  Simulation sim(cfg);
  sim.run();
  const int n = 16;
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(sim.state()(j * n + i, 0) - sim.state()(i * n + j, 0)));
      worst = std::max(worst, std::abs(sim.state()(j * n + i, 1) - sim.state()(i * n + j, 2)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("rejected attempts halve the step") {
  SimulationConfig cfg = small("isentropic_vortex", 10, 3);
  // Stability mode records the proposal: courant * dt_stab.
  cfg.timestep.mode = TimestepMode::stability;
  cfg.timestep.courant = 2.0;
  cfg.stepper.fail_attempts = {1};
  Simulation sim(cfg);
  sim.run();
  const auto& d = sim.diagnostics();
  REQUIRE(d.size() == 3);
  CHECK(d[0].rejections == 0);
  CHECK(d[1].rejections == 1);
  CHECK(d[1].rejection_reason.find("forced") != std::string::npos);
  CHECK(d[0].dt == doctest::Approx(2.0 * d[0].dt_stab).epsilon(1e-12));
  CHECK(d[1].dt == doctest::Approx(0.5 * 2.0 * d[1].dt_stab).epsilon(1e-12));
  CHECK(d[2].dt == doctest::Approx(1.5 * d[1].dt).epsilon(1e-12));

  cfg.stepper.fail_attempts = {0, 1, 2, 3, 4};
  cfg.timestep.min_fraction = 0.01;
  Simulation doomed(cfg);
  CHECK_THROWS_AS(doomed.run(), SolverAbort);
}

TEST_CASE("convergence study") {
  SimulationConfig cfg = small("constant", 8, 0);
  CHECK_THROWS_AS(convergence_study(cfg, {8}), ConfigError);
  const std::vector<ConvergenceRow> rows = convergence_study(cfg, {8, 16});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].cells == 64);
  CHECK(rows[1].cells == 256);
  CHECK(std::isnan(rows[0].rate_l1));
  for (const ConvergenceRow& r : rows) CHECK(r.density.linf < 1e-11);
  std::ostringstream out;
  write_convergence_csv(out, rows);
  CHECK(out.str().rfind("cells,h,L1,rate_L1,Linf,rate_Linf,seconds\n", 0) == 0);
  SimulationConfig sod = small("radial_sod", 8, 1);
  CHECK_THROWS_AS(convergence_study(sod, {8, 16}), ConfigError);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir("cli");
  fs::create_directories(dir);
  const fs::path good = dir / "good.ini", bad = dir / "bad.ini", abort = dir / "abort.ini";
  std::ofstream(good) << "[case]\nid = constant\nmax_steps = 1\n[mesh]\nnx = 8\n";
  std::ofstream(bad) << "[mesh]\nnz = 8\n";
  std::ofstream(abort) << "[case]\nid = constant\n[mesh]\nnx = 8\n[time]\nmin_fraction = 0.4\n[debug]\nfail_attempts = 0,1,2,3\n";
  CHECK(run_cli("run --config " + good.string()) == 0);
  CHECK(run_cli("run --config " + bad.string()) == 2);
  CHECK(run_cli("run --config " + good.string() + " --mode sideways") == 2);
  CHECK(run_cli("run --config " + abort.string()) == 3);
  CHECK(run_cli("run --config " + good.string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "final.csv"));
  CHECK(run_cli("norms --config " + good.string() + " --field " + (dir / "out" / "final.csv").string()) == 0);
  CHECK(run_cli("convergence --config " + good.string() + " --grids 8,16 --table " + (dir / "t.csv").string()) == 0);
  CHECK(fs::exists(dir / "t.csv"));
  CHECK(run_cli("") == 2);
  fs::remove_all(dir);
}
