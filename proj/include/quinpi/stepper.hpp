#pragma once

#include <array>
#include <string>
#include <vector>

#include "quinpi/discretization.hpp"
#include "quinpi/newton.hpp"
#include "quinpi/tableau.hpp"

namespace quinpi {

/// G(U) = U - B + theta K_op(U).
void stage_residual(const Discretization& disc, const Field& b, double theta, const FrozenReconstruction& op,
                    const Field& u, std::vector<double>& g);

/// Solves G(U) = 0 by Newton starting from `u`. `jac` must carry the pattern
/// matching `op` (see Discretization::jacobian).
NewtonReport solve_stage(const Discretization& disc, const Field& b, double theta, const FrozenReconstruction& op,
                         Field& u, BlockMatrix& jac, const NewtonConfig& config);

/// One first-order implicit Euler step: U + dt K_1(U) = U_old.
NewtonReport ie_step(const Discretization& disc, const Field& old, double dt, Field& out,
                     const NewtonConfig& config);

struct StepperConfig {
  NewtonConfig predictor;
  NewtonConfig corrector;
  /// Fault injection for tests: Newton of the stage solves is forced to
  /// fail on the listed step attempts (0-based count of attempts).
  std::vector<int> fail_attempts;
};

/// Everything produced by one predictor + corrector pass.
struct StepWorkspace {
  double dt = 0.0;
  Field u0;
  std::array<Field, 3> predictor;            // U*^(s)
  std::array<StageFluxes, 3> predictor_flux;  // first-order fluxes at U*^(s)
  std::array<Field, 3> predictor_k;
  std::array<FrozenReconstruction, 3> ops;   // weights frozen on U*^(s)
  std::array<Field, 3> stage;                // U^(s)
  std::array<StageFluxes, 3> stage_flux;
  std::array<Field, 3> k;                    // K^(s)
};

struct StepReport {
  bool ok = false;
  std::string failure;
  std::array<int, 3> predictor_iterations{};
  std::array<int, 3> corrector_iterations{};
  int linear_iterations = 0;
};

/// Predictor (composite implicit Euler) interleaved with the DIRK corrector,
/// stage by stage.
class QuinpiStepper {
 public:
  QuinpiStepper(const Discretization& disc, StepperConfig config);

  const ButcherTableau& tableau() const { return dirk_; }
  const ButcherTableau& predictor_tableau() const { return composite_; }
  const StepperConfig& config() const { return config_; }
  StepperConfig& config() { return config_; }

  /// Runs the pass from `un`. On failure the workspace content is undefined.
  StepReport run(const Field& un, double dt, StepWorkspace& ws);

  /// Number of calls to run() so far.
  int attempts() const { return attempts_; }

 private:
  const Discretization* disc_;
  StepperConfig config_;
  ButcherTableau dirk_;
  ButcherTableau composite_;
  FrozenReconstruction first_order_;
  BlockMatrix compact_jac_;
  BlockMatrix full_jac_;
  int attempts_ = 0;
};

/// U^n - dt sum_s w_s K^(s).
void weighted_update(const Field& un, double dt, const std::vector<double>& weights, const std::array<Field, 3>& k,
                     Field& out);

/// DIRK update U^n - dt sum b_s K^(s).
void dirk_update(const StepWorkspace& ws, const ButcherTableau& t, Field& out);

/// Flux form of the composite implicit Euler update,
/// U^n - dt sum (c_s - c_{s-1}) K*^(s).
void predictor_update(const StepWorkspace& ws, const ButcherTableau& composite, Field& out);

}  // namespace quinpi
