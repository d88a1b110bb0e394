#pragma once

#include <string>

#include "quinpi/field.hpp"
#include "quinpi/mesh.hpp"
#include "quinpi/model.hpp"

namespace quinpi {

enum class TimestepMode { stability, accuracy };

TimestepMode timestep_mode_from_string(const std::string& name);
std::string to_string(TimestepMode mode);

struct TimestepConfig {
  TimestepMode mode = TimestepMode::accuracy;
  /// C for stability mode, C_acc for accuracy mode.
  double courant = 1.0;
  /// Steps at the start that use the stability formula regardless of mode.
  int acoustic_startup_steps = 0;
  /// Constant step if positive (overrides the mode).
  double fixed_dt = 0.0;
  double growth = 1.5;
  /// Abort once the step falls below this fraction of t_final.
  double min_fraction = 1e-12;
};

/// h / max_i spectral_radius(U_i): the step at unit acoustic Courant number.
double stability_dt(const Mesh& mesh, const Model& model, const Field& u);

/// h / max_i |velocity_i|, or 0 if the flow is at rest relative to the
/// acoustic speed (max |u| < 1e-12 max acoustic speed).
double material_dt(const Mesh& mesh, const Model& model, const Field& u);

/// Proposes steps from the configured mode and applies the halving on
/// rejection and the 1.5x regrowth afterwards.
class TimestepController {
 public:
  TimestepController(TimestepConfig config, double t_final) : config_(config), t_final_(t_final) {}

  const TimestepConfig& config() const { return config_; }

  /// Step to attempt next. `step` is the index of the step about to be taken.
  double propose(const Mesh& mesh, const Model& model, const Field& u, int step, double t);

  /// Halves the step after a failed attempt and returns it. Throws
  /// SolverAbort when it falls below the minimum.
  double reject(double dt);

  /// Records an accepted step.
  void accept(double dt) { last_accepted_ = dt; }

  /// Unit-Courant stability step of the last proposal.
  double last_stability_dt() const { return last_stab_; }
  bool recovering() const { return recovering_; }

 private:
  TimestepConfig config_;
  double t_final_;
  double last_accepted_ = 0.0;
  double last_stab_ = 0.0;
  bool recovering_ = false;
};

}  // namespace quinpi
