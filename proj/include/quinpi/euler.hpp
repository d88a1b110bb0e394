#pragma once

#include <array>

#include "quinpi/model.hpp"

namespace quinpi {

struct EulerParams {
  double gamma = 1.4;
  /// Mach scaling; 1 gives the dimensional equations.
  double eps = 1.0;
};

struct Primitive {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
};

/// 2D Euler equations in the eps-scaled form
///   E = p/(gamma-1) + eps^2/2 rho |u|^2,  momentum flux rho u(x)u + p/eps^2 I.
class Euler final : public Model {
 public:
  explicit Euler(EulerParams params = {});

  const EulerParams& params() const { return params_; }

  int m() const override { return 4; }
  std::vector<std::string> component_names() const override { return {"rho", "rho_u", "rho_v", "E"}; }

  bool admissible(const double* u) const override;
  void normal_flux(const double* u, Vec2 n, double* f) const override;
  void flux_jacobian(const double* u, Vec2 n, double* jac) const override;
  double max_wavespeed(const double* u, Vec2 n) const override;
  double spectral_radius(const double* u) const override;
  double material_speed(const double* u, Vec2 n) const override;
  double material_speed_max(const double* u) const override;
  double acoustic_speed(const double* u) const override;
  double entropy(const double* u) const override;
  Vec2 entropy_flux(const double* u) const override;
  void entropy_gradient(const double* u, double* g) const override;
  void reflect(const double* u, Vec2 n, double* out) const override;
  void reflect_matrix(Vec2 n, double* mat) const override;

  double pressure(const double* u) const;
  double sound_speed(const double* u) const;
  Primitive to_primitive(const double* u) const;
  std::array<double, 4> to_conserved(const Primitive& w) const;

 private:
  EulerParams params_;
  double inv_eps2_;
};

}  // namespace quinpi
