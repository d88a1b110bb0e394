#include "quinpi/timestep.hpp"

#include <algorithm>

#include "quinpi/errors.hpp"

namespace quinpi {

TimestepMode timestep_mode_from_string(const std::string& name) {
  if (name == "stab" || name == "stability") return TimestepMode::stability;
  if (name == "acc" || name == "accuracy") return TimestepMode::accuracy;
  throw ConfigError("unknown time-step mode '" + name + "' (expected stab or acc)");
}

std::string to_string(TimestepMode mode) { return mode == TimestepMode::stability ? "stab" : "acc"; }

double stability_dt(const Mesh& mesh, const Model& model, const Field& u) {
  double lmax = 0.0;
  for (int i = 0; i < u.n; ++i) lmax = std::max(lmax, model.spectral_radius(u.cell(i)));
  if (!(lmax > 0.0)) throw SolverAbort("all wave speeds vanish; no stability time step");
  return mesh.h / lmax;
}

double material_dt(const Mesh& mesh, const Model& model, const Field& u) {
  double vmax = 0.0;
  double amax = 0.0;
  for (int i = 0; i < u.n; ++i) {
    vmax = std::max(vmax, model.material_speed_max(u.cell(i)));
    amax = std::max(amax, model.acoustic_speed(u.cell(i)));
  }
  if (vmax <= 1e-12 * amax || vmax == 0.0) return 0.0;
  return mesh.h / vmax;
}

double TimestepController::propose(const Mesh& mesh, const Model& model, const Field& u, int step, double t) {
  last_stab_ = stability_dt(mesh, model, u);
  double dt = 0.0;
  if (config_.fixed_dt > 0.0) {
    dt = config_.fixed_dt;
  } else {
    const double dt_stab = config_.courant * last_stab_;
    dt = dt_stab;
    if (config_.mode == TimestepMode::accuracy && step >= config_.acoustic_startup_steps) {
      const double dt_mat = material_dt(mesh, model, u);
      if (dt_mat > 0.0) dt = config_.courant * dt_mat;
    }
  }
  if (recovering_) {
    const double grown = config_.growth * last_accepted_;
    if (grown < dt) {
      dt = grown;
    } else {
      recovering_ = false;
    }
  }
  return std::min(dt, t_final_ - t);
}

double TimestepController::reject(double dt) {
  const double next = 0.5 * dt;
  recovering_ = true;
  if (next < config_.min_fraction * t_final_)
    throw SolverAbort("time step fell below " + std::to_string(config_.min_fraction * t_final_));
  return next;
}

}  // namespace quinpi
