#pragma once

#include <string>
#include <vector>

#include "quinpi/geometry.hpp"

namespace quinpi {

/// Upper bound on m used for stack scratch arrays.
constexpr int kMaxComponents = 8;

/// A system of m conservation laws u_t + div f(u) = S(u) with an entropy pair.
/// State pointers refer to m contiguous doubles; matrices are m x m row-major.
class Model {
 public:
  virtual ~Model() = default;

  virtual int m() const = 0;
  virtual std::vector<std::string> component_names() const = 0;

  virtual bool admissible(const double* u) const = 0;
  /// Throws NonphysicalState (tagged with `cell`) if `u` is not admissible.
  void require_admissible(const double* u, int cell = -1) const;

  /// f(u) . n
  virtual void normal_flux(const double* u, Vec2 n, double* f) const = 0;
  /// d(f(u) . n)/du
  virtual void flux_jacobian(const double* u, Vec2 n, double* jac) const = 0;
  /// Spectral radius of the normal flux Jacobian.
  virtual double max_wavespeed(const double* u, Vec2 n) const = 0;
  /// Largest wave speed over all directions.
  virtual double spectral_radius(const double* u) const = 0;
  /// |u . n| for the material waves.
  virtual double material_speed(const double* u, Vec2 n) const = 0;
  /// Magnitude of the material velocity.
  virtual double material_speed_max(const double* u) const = 0;
  /// Characteristic acoustic speed (c/eps for Euler); 0 if none.
  virtual double acoustic_speed(const double* u) const = 0;

  virtual double entropy(const double* u) const = 0;
  virtual Vec2 entropy_flux(const double* u) const = 0;
  virtual void entropy_gradient(const double* u, double* g) const = 0;

  /// Mirror state across a wall with unit normal n.
  virtual void reflect(const double* u, Vec2 n, double* out) const = 0;
  /// Matrix of the (linear) reflection.
  virtual void reflect_matrix(Vec2 n, double* mat) const = 0;

  virtual bool has_source() const { return false; }
  virtual void source(const double* u, double* s) const;
  virtual void source_jacobian(const double* u, double* jac) const;
};

}  // namespace quinpi
