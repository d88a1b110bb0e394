#include "quinpi/simulation.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "quinpi/errors.hpp"
#include "quinpi/gmsh_io.hpp"
#include "quinpi/output.hpp"

namespace quinpi {

MeshBundle build_mesh_bundle(const MeshConfig& cfg, const TestCase& tc) {
  MeshBundle b;
  if (cfg.kind == "cartesian") {
    int ny = cfg.ny;
    if (ny == 0) ny = std::max(1, static_cast<int>(std::lround(cfg.nx * tc.domain.height() / tc.domain.width())));
    b.mesh = build_cartesian_mesh(cfg.nx, ny, tc.domain, tc.bc);
  } else if (cfg.kind == "triangles") {
    TriangleMeshSpec spec;
    spec.n = cfg.tri_n;
    spec.domain = tc.domain;
    spec.jitter = cfg.jitter;
    spec.seed = cfg.seed;
    spec.refinements = cfg.refinements;
    spec.pattern = cfg.pattern;
    RawTriangulation raw = generate_triangulation(spec);
    MeshAssemblyOptions opts;
    opts.domain = tc.domain;
    opts.periodic_x = tc.bc.periodic_x();
    opts.periodic_y = tc.bc.periodic_y();
    opts.classify = side_classifier(tc.domain, tc.bc);
    b.mesh = assemble_mesh(std::move(raw.vertices), std::move(raw.triangles), opts);
  } else if (cfg.kind == "gmsh") {
    GmshImportOptions opts;
    opts.periodic_x = tc.bc.periodic_x();
    opts.periodic_y = tc.bc.periodic_y();
    opts.sides = tc.bc;
    b.mesh = import_gmsh(cfg.file, opts);
  } else {
    throw ConfigError("unknown mesh kind '" + cfg.kind + "'");
  }
  b.rules = compute_quadratures(b.mesh);
  b.basis = compute_basis_moments(b.mesh, b.rules);
  b.stencils = build_stencils(b.mesh);
  return b;
}

Simulation::Simulation(SimulationConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  tc_ = make_test_case(cfg_.test_case, cfg_.params);
  t_final_ = cfg_.t_final > 0.0 ? cfg_.t_final : tc_.t_final;
  cfg_.t_final = t_final_;
  if (cfg_.acoustic_startup_steps < 0) cfg_.acoustic_startup_steps = tc_.acoustic_startup_steps;
  cfg_.timestep.acoustic_startup_steps = cfg_.acoustic_startup_steps;
  if (std::isnan(cfg_.limiter_threshold)) cfg_.limiter_threshold = tc_.limiter_threshold;
  cfg_.limiter.threshold = cfg_.limiter_threshold;

  bundle_ = std::make_unique<MeshBundle>(build_mesh_bundle(cfg_.mesh, tc_));
  model_ = std::make_unique<Euler>(tc_.euler);
  recon_ = std::make_unique<Reconstruction>(bundle_->mesh, bundle_->stencils, bundle_->basis, bundle_->rules,
                                            cfg_.cwenoz);
  disc_ = std::make_unique<Discretization>(bundle_->mesh, *model_, bundle_->rules, bundle_->stencils, bundle_->basis,
                                           *recon_);
  const Euler& model = *model_;
  const PrimitiveFn init = tc_.initial;
  disc_->set_dirichlet([&model, init](Vec2 x, double* u) {
    const auto c = model.to_conserved(init(x));
    for (int k = 0; k < 4; ++k) u[k] = c[k];
  });
  stepper_ = std::make_unique<QuinpiStepper>(*disc_, cfg_.stepper);
  limiter_ = std::make_unique<EntropyLimiter>(*disc_, cfg_.limiter);
  controller_ = std::make_unique<TimestepController>(cfg_.timestep, t_final_);

  u_ = cell_averages(bundle_->mesh, model, tc_.initial, cfg_.init_degree);
  for (int i = 0; i < u_.n; ++i) model.require_admissible(u_.cell(i), i);
  u_init_ = u_;
  entropy_means(*disc_, u_, cfg_.limiter.cell_average_entropy, q_);
  production_.assign(u_.n, 0.0);
  flags_.assign(u_.n, 3);

  if (!cfg_.output.dir.empty()) {
    std::filesystem::create_directories(cfg_.output.dir);
    const std::string path = cfg_.output.dir + "/config.ini";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_config(out, cfg_);
  }
}

bool Simulation::finished() const {
  if (cfg_.max_steps > 0 && steps_ >= cfg_.max_steps) return true;
  return t_ >= t_final_ * (1.0 - 1e-12);
}

void Simulation::step() {
  double dt = controller_->propose(mesh(), *model_, u_, steps_, t_);
  StepDiagnostics d;
  d.dt_stab = controller_->last_stability_dt();
  for (;;) {
    StepReport rep = stepper_->run(u_, dt, ws_);
    if (rep.ok) {
      LimiterResult lim = limiter_->run(ws_, q_);
      if (lim.admissible) {
        d.predictor_newton = rep.predictor_iterations;
        d.corrector_newton = rep.corrector_iterations;
        d.linear_iterations = rep.linear_iterations;
        d.limiter_sweeps = lim.sweeps;
        for (int f : lim.flags) {
          if (f == 2) ++d.cells_order2;
          if (f == 1) ++d.cells_order1;
        }
        double smax = 0.0;
        for (double s : lim.production) smax = std::max(smax, std::abs(s));
        d.max_entropy_production = smax;
        u_ = std::move(lim.u);
        q_ = std::move(lim.q_new);
        production_ = std::move(lim.production);
        flags_ = std::move(lim.flags);
        break;
      }
      rep.failure = "state not admissible after limiting";
    }
    ++d.rejections;
    d.rejection_reason = rep.failure;
    if (cfg_.verbose) std::cerr << "step " << steps_ + 1 << ": rejected dt=" << dt << " (" << rep.failure << ")\n";
    try {
      dt = controller_->reject(dt);
    } catch (const SolverAbort& e) {
      throw SolverAbort(std::string(e.what()) + " at t=" + std::to_string(t_) + "; last failure: " + rep.failure);
    }
  }
  controller_->accept(dt);
  t_ += dt;
  ++steps_;
  d.step = steps_;
  d.t = t_;
  d.dt = dt;
  d.c_as = dt / d.dt_stab;
  diag_.push_back(d);
  if (cfg_.verbose) {
    std::cerr << "step " << d.step << " t=" << d.t << " dt=" << d.dt << " C_as=" << d.c_as
              << " newton=" << d.corrector_newton[0] << '/' << d.corrector_newton[1] << '/' << d.corrector_newton[2]
              << " lin=" << d.linear_iterations << " sweeps=" << d.limiter_sweeps << " o2=" << d.cells_order2
              << " o1=" << d.cells_order1 << '\n';
  }
}

void Simulation::run() {
  if (!cfg_.output.dir.empty()) write_outputs("field_0000");
  while (!finished()) {
    step();
    if (!cfg_.output.dir.empty() && cfg_.output.every > 0 && steps_ % cfg_.output.every == 0) {
      char tag[32];
      std::snprintf(tag, sizeof tag, "field_%04d", steps_);
      write_outputs(tag);
    }
  }
  if (!cfg_.output.dir.empty()) {
    write_outputs("final");
    write_diagnostics_csv(cfg_.output.dir + "/diagnostics.csv", diag_);
  }
}

void Simulation::write_outputs(const std::string& tag) const {
  const std::string base = cfg_.output.dir + "/" + tag;
  if (cfg_.output.format == "csv" || cfg_.output.format == "both")
    write_field_csv(base + ".csv", mesh(), *model_, u_, production_, flags_);
  if (cfg_.output.format == "vtk" || cfg_.output.format == "both")
    write_vtk(base + ".vtk", mesh(), *model_, u_, production_, flags_);
}

Field Simulation::exact_state(double t, int degree) const {
  if (!tc_.exact) throw ConfigError("test case '" + tc_.id + "' has no exact solution");
  const ExactFn exact = tc_.exact;
  return cell_averages(mesh(), *model_, [exact, t](Vec2 x) { return exact(x, t); }, degree);
}

ErrorNorms error_norms(const Mesh& mesh, const Field& u, const Field& ref, int c) {
  if (u.n != mesh.num_cells() || ref.n != u.n || ref.m != u.m)
    throw MeshError("error_norms: fields do not match the mesh");
  ErrorNorms e;
  double area = 0.0;
  for (int i = 0; i < u.n; ++i) {
    const double d = std::abs(u(i, c) - ref(i, c));
    e.l1 += d * mesh.cells[i].area;
    e.linf = std::max(e.linf, d);
    area += mesh.cells[i].area;
  }
  e.l1 /= area;
  return e;
}

double kinetic_energy(const Mesh& mesh, const Euler& model, const Field& u) {
  const double eps2 = model.params().eps * model.params().eps;
  double sum = 0.0;
  for (int i = 0; i < u.n; ++i) {
    const double* ui = u.cell(i);
    sum += mesh.cells[i].area * 0.5 * eps2 * (ui[1] * ui[1] + ui[2] * ui[2]) / ui[0];
  }
  return sum;
}

double kinetic_energy_ratio(const Mesh& mesh, const Euler& model, const Field& u, const Field& u0) {
  return kinetic_energy(mesh, model, u) / kinetic_energy(mesh, model, u0);
}

std::vector<double> conserved_totals(const Mesh& mesh, const Field& u) {
  std::vector<double> tot(u.m, 0.0);
  for (int i = 0; i < u.n; ++i)
    for (int c = 0; c < u.m; ++c) tot[c] += mesh.cells[i].area * u(i, c);
  return tot;
}

std::vector<ConvergenceRow> convergence_study(const SimulationConfig& base, const std::vector<int>& grids) {
  if (grids.size() < 2) throw ConfigError("convergence study needs at least two grids");
  std::vector<ConvergenceRow> rows;
  for (int g : grids) {
    SimulationConfig cfg = base;
    if (cfg.mesh.kind == "triangles") {
      cfg.mesh.refinements = g;
    } else if (cfg.mesh.kind == "cartesian") {
      cfg.mesh.nx = g;
      cfg.mesh.ny = 0;
    } else {
      throw ConfigError("convergence study supports cartesian and triangles meshes");
    }
    const auto start = std::chrono::steady_clock::now();
    Simulation sim(cfg);
    if (!sim.has_exact()) throw ConfigError("test case '" + cfg.test_case + "' has no exact solution");
    sim.run();
    ConvergenceRow row;
    row.cells = sim.mesh().num_cells();
    row.h = sim.mesh().h;
    row.density = error_norms(sim.mesh(), sim.state(), sim.exact_state(sim.time(), 4), 0);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.rate_l1 = std::nan("");
    row.rate_linf = std::nan("");
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      // Effective refinement factor from the cell counts (2 for dyadic grids).
      const double factor = std::log(std::sqrt(static_cast<double>(row.cells) / prev.cells));
      row.rate_l1 = std::log(prev.density.l1 / row.density.l1) / factor;
      row.rate_linf = std::log(prev.density.linf / row.density.linf) / factor;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace quinpi
