#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quinpi/euler.hpp"
#include "quinpi/field.hpp"
#include "quinpi/mesh.hpp"

namespace quinpi {

using PrimitiveFn = std::function<Primitive(Vec2 x)>;
using ExactFn = std::function<Primitive(Vec2 x, double t)>;

struct TestCaseParams {
  /// Gresho: maximum Mach number.
  double mach = 0.1;
  /// Isentropic vortex strength.
  double beta = 5.0;
  /// Baroclinic test Mach scaling.
  double baroclinic_eps = 0.05;
};

struct TestCase {
  std::string id;
  Rect domain;
  BoundarySpec bc;
  EulerParams euler;
  double t_final = 0.0;
  /// Default limiter threshold (infinity: not limited by default).
  double limiter_threshold = 0.0;
  /// Steps taken with the acoustic time step before switching to accuracy mode.
  int acoustic_startup_steps = 0;
  PrimitiveFn initial;
  /// Exact solution if known (null otherwise).
  ExactFn exact;
};

/// Known ids: isentropic_vortex, radial_sod, rcs_riemann, rcs_riemann_small,
/// contact_acoustic, gresho_classic, gresho_c2, baroclinic, constant.
TestCase make_test_case(const std::string& id, const TestCaseParams& params = {});
std::vector<std::string> test_case_ids();

/// Isentropic vortex centred at the origin (no advection, no wrapping).
Primitive isentropic_vortex(Vec2 x, double beta, double gamma);

/// Swirl velocity and pressure increment of the Gresho vortices.
double gresho_c2_velocity(double r);
double gresho_c2_pressure(double r);  // p - p0
double gresho_classic_velocity(double r);
double gresho_classic_pressure(double r);  // p - p0

/// Cell averages of the conserved variables of `f` by the cell rule of the
/// given degree (2 or 4).
Field cell_averages(const Mesh& mesh, const Euler& model, const PrimitiveFn& f, int degree);

}  // namespace quinpi
