#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "quinpi/config.hpp"
#include "quinpi/discretization.hpp"
#include "quinpi/euler.hpp"
#include "quinpi/limiter.hpp"
#include "quinpi/stepper.hpp"
#include "quinpi/testcases.hpp"
#include "quinpi/timestep.hpp"

namespace quinpi {

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;  // time after the step
  double dt = 0.0;
  /// Unit-Courant stability step and the ratio dt / dt_stab.
  double dt_stab = 0.0;
  double c_as = 0.0;
  int rejections = 0;
  std::array<int, 3> predictor_newton{};
  std::array<int, 3> corrector_newton{};
  int linear_iterations = 0;
  int limiter_sweeps = 0;
  int cells_order2 = 0;
  int cells_order1 = 0;
  double max_entropy_production = 0.0;
  std::string rejection_reason;  // of the last rejected attempt
};

/// Mesh plus the setup products the solver reads.
struct MeshBundle {
  Mesh mesh;
  QuadratureRules rules;
  BasisSet basis;
  StencilSet stencils;
};

MeshBundle build_mesh_bundle(const MeshConfig& cfg, const TestCase& tc);

/// Time loop: predictor, corrector, entropy check and cascade per step.
class Simulation {
 public:
  explicit Simulation(SimulationConfig cfg);

  const SimulationConfig& config() const { return cfg_; }
  const TestCase& test_case() const { return tc_; }
  const Mesh& mesh() const { return bundle_->mesh; }
  const MeshBundle& bundle() const { return *bundle_; }
  const Euler& model() const { return *model_; }
  const Discretization& discretization() const { return *disc_; }
  const Reconstruction& reconstruction() const { return *recon_; }
  QuinpiStepper& stepper() { return *stepper_; }

  const Field& state() const { return u_; }
  const Field& initial_state() const { return u_init_; }
  double time() const { return t_; }
  double t_final() const { return t_final_; }
  int steps() const { return steps_; }
  bool finished() const;

  /// Takes one accepted step (retrying with halved steps). Throws SolverAbort.
  void step();
  /// Steps until t_final or max_steps, writing outputs on the configured cadence.
  void run();

  const std::vector<StepDiagnostics>& diagnostics() const { return diag_; }
  /// Entropy production and flags of the last accepted step (zeros/3 initially).
  const std::vector<double>& entropy_production() const { return production_; }
  const std::vector<int>& flags() const { return flags_; }

  /// Exact cell averages at the current time, if the case has an exact solution.
  bool has_exact() const { return static_cast<bool>(tc_.exact); }
  Field exact_state(double t, int degree = 4) const;

 private:
  void write_outputs(const std::string& tag) const;

  SimulationConfig cfg_;
  TestCase tc_;
  std::unique_ptr<MeshBundle> bundle_;
  std::unique_ptr<Euler> model_;
  std::unique_ptr<Reconstruction> recon_;
  std::unique_ptr<Discretization> disc_;
  std::unique_ptr<QuinpiStepper> stepper_;
  std::unique_ptr<EntropyLimiter> limiter_;
  std::unique_ptr<TimestepController> controller_;
  Field u_;
  Field u_init_;
  std::vector<double> q_;  // Q(eta(U^n))
  std::vector<double> production_;
  std::vector<int> flags_;
  StepWorkspace ws_;
  double t_ = 0.0;
  double t_final_ = 0.0;
  int steps_ = 0;
  std::vector<StepDiagnostics> diag_;
};

struct ErrorNorms {
  double l1 = 0.0;
  double linf = 0.0;
};

/// Area-weighted L1 (divided by the total area) and max norm of component c.
/// Throws MeshError if the fields do not match.
ErrorNorms error_norms(const Mesh& mesh, const Field& u, const Field& ref, int c);

/// Sum |cell| 1/2 rho |u|^2 / sum at t = 0, with the eps^2 factor of the
/// scaled energy.
double kinetic_energy(const Mesh& mesh, const Euler& model, const Field& u);
double kinetic_energy_ratio(const Mesh& mesh, const Euler& model, const Field& u, const Field& u0);

/// Per-component sum |cell| U_i.
std::vector<double> conserved_totals(const Mesh& mesh, const Field& u);

struct ConvergenceRow {
  int cells = 0;
  double h = 0.0;
  ErrorNorms density;
  double rate_l1 = 0.0;  // NaN for the first row
  double rate_linf = 0.0;
  double seconds = 0.0;
};

/// Runs the template for each mesh setting and compares the density with
/// the exact solution. `grids` are nx values (cartesian) or refinement
/// levels (triangles). Rates are log2 of successive error ratios.
std::vector<ConvergenceRow> convergence_study(const SimulationConfig& base, const std::vector<int>& grids);

}  // namespace quinpi
