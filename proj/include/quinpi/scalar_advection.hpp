#pragma once

#include "quinpi/model.hpp"

namespace quinpi {

/// u_t + div(a u) = lambda u, with the quadratic entropy u^2/2.
class ScalarAdvection final : public Model {
 public:
  explicit ScalarAdvection(Vec2 velocity, double source_rate = 0.0)
      : a_(velocity), lambda_(source_rate) {}

  Vec2 velocity() const { return a_; }

  int m() const override { return 1; }
  std::vector<std::string> component_names() const override { return {"u"}; }

  bool admissible(const double* u) const override;
  void normal_flux(const double* u, Vec2 n, double* f) const override { f[0] = dot(a_, n) * u[0]; }
  void flux_jacobian(const double*, Vec2 n, double* jac) const override { jac[0] = dot(a_, n); }
  double max_wavespeed(const double*, Vec2 n) const override { return std::abs(dot(a_, n)); }
  double spectral_radius(const double*) const override { return norm(a_); }
  double material_speed(const double*, Vec2 n) const override { return std::abs(dot(a_, n)); }
  double material_speed_max(const double*) const override { return norm(a_); }
  double acoustic_speed(const double*) const override { return 0.0; }

  double entropy(const double* u) const override { return 0.5 * u[0] * u[0]; }
  Vec2 entropy_flux(const double* u) const override { return (0.5 * u[0] * u[0]) * a_; }
  void entropy_gradient(const double* u, double* g) const override { g[0] = u[0]; }

  void reflect(const double* u, Vec2, double* out) const override { out[0] = u[0]; }
  void reflect_matrix(Vec2, double* mat) const override { mat[0] = 1.0; }

  bool has_source() const override { return lambda_ != 0.0; }
  void source(const double* u, double* s) const override { s[0] = lambda_ * u[0]; }
  void source_jacobian(const double*, double* jac) const override { jac[0] = lambda_; }

 private:
  Vec2 a_;
  double lambda_;
};

}  // namespace quinpi
