#include "quinpi/testcases.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "quinpi/errors.hpp"
#include "quinpi/quadrature.hpp"

namespace quinpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Offset from c to x through the nearest periodic image.
Vec2 periodic_offset(Vec2 x, Vec2 c, const Rect& d) {
  Vec2 r = x - c;
  r.x -= d.width() * std::round(r.x / d.width());
  r.y -= d.height() * std::round(r.y / d.height());
  return r;
}

Primitive swirl(Vec2 x, double u_theta, double p) {
  const double r = norm(x);
  Primitive w;
  w.rho = 1.0;
  w.p = p;
  if (r > 0.0) {
    w.u = -x.y / r * u_theta;
    w.v = x.x / r * u_theta;
  }
  return w;
}

double gresho_c2_dynamic(double r) {
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double r4 = r2 * r2;
  const double r5 = r4 * r;
  const double r6 = r3 * r3;
  const double r7 = r6 * r;
  const double r8 = r4 * r4;
  const double r9 = r8 * r;
  const double r10 = r5 * r5;
  return 35156250.0 * r10 - 117187500.0 * r9 + 1400390625.0 / 8.0 * r8 - 154687500.0 * r7 +
         269843750.0 / 3.0 * r6 - 36240000.0 * r5 + 10387500.0 * r4 - 6440000.0 / 3.0 * r3 + 324000.0 * r2 -
         38400.0 * r + 1024.0 * std::log(r) + 1024.0 * std::log(5.0) + 283739.0 / 105.0;
}

}  // namespace

Primitive isentropic_vortex(Vec2 x, double beta, double gamma) {
  const double pi = std::numbers::pi;
  const double r2 = x.x * x.x + x.y * x.y;
  const double t = 1.0 - (gamma - 1.0) * beta * beta / (8.0 * gamma * pi * pi) * std::exp(1.0 - r2);
  const double g = beta / (2.0 * pi) * std::exp(0.5 * (1.0 - r2));
  Primitive w;
  w.rho = std::pow(t, 1.0 / (gamma - 1.0));
  w.u = 1.0 - g * x.y;
  w.v = 1.0 + g * x.x;
  w.p = std::pow(w.rho, gamma);
  return w;
}

double gresho_c2_velocity(double r) {
  if (r <= 0.2) return 18750.0 * std::pow(r, 5) - 9375.0 * std::pow(r, 4) + 1250.0 * std::pow(r, 3);
  if (r <= 0.4) {
    const double a = 5.0 * r - 2.0;
    const double b = 5.0 * r - 1.0;
    return a * a * a * (-15.0 * r - 6.0 * b * b + 2.0);
  }
  return 0.0;
}

double gresho_c2_pressure(double r) {
  if (r <= 0.2) {
    const double r2 = r * r;
    return 390625.0 / 168.0 * r2 * r2 * r2 *
           (15120.0 * r2 * r2 - 16800.0 * r2 * r + 7245.0 * r2 - 1440.0 * r + 112.0);
  }
  if (r <= 0.4) return gresho_c2_dynamic(r);
  return gresho_c2_dynamic(0.4);
}

double gresho_classic_velocity(double r) {
  if (r <= 0.2) return 5.0 * r;
  if (r <= 0.4) return 2.0 - 5.0 * r;
  return 0.0;
}

double gresho_classic_pressure(double r) {
  if (r <= 0.2) return 12.5 * r * r;
  if (r <= 0.4) return 12.5 * r * r + 4.0 * (1.0 - 5.0 * r - std::log(0.2) + std::log(r));
  return -2.0 + 4.0 * std::log(2.0);
}

std::vector<std::string> test_case_ids() {
  return {"isentropic_vortex", "radial_sod",     "rcs_riemann", "rcs_riemann_small", "contact_acoustic",
          "gresho_classic",    "gresho_c2",      "baroclinic",  "constant"};
}

TestCase make_test_case(const std::string& id, const TestCaseParams& params) {
  TestCase tc;
  tc.id = id;
  tc.limiter_threshold = kInf;
  if (id == "isentropic_vortex") {
    tc.domain = {-5.0, 5.0, -5.0, 5.0};
    tc.bc = BoundarySpec::all(BoundaryKind::periodic);
    tc.euler = {1.4, 1.0};
    tc.t_final = 2.0;
    const double beta = params.beta;
    const Rect d = tc.domain;
    tc.exact = [beta, d](Vec2 x, double t) {
      return isentropic_vortex(periodic_offset(x, Vec2{t, t}, d), beta, 1.4);
    };
    tc.initial = [exact = tc.exact](Vec2 x) { return exact(x, 0.0); };
  } else if (id == "radial_sod") {
    tc.domain = {0.0, 1.0, 0.0, 1.0};
    tc.bc = BoundarySpec::all(BoundaryKind::wall);
    tc.euler = {1.4, 1.0};
    tc.t_final = 0.2;
    tc.limiter_threshold = 0.05;
    tc.acoustic_startup_steps = 5;
    tc.initial = [](Vec2 x) {
      if (x.x * x.x + x.y * x.y < 0.5) return Primitive{1.0, 0.0, 0.0, 1.0};
      return Primitive{0.125, 0.0, 0.0, 0.1};
    };
  } else if (id == "rcs_riemann" || id == "rcs_riemann_small") {
    tc.domain = {0.0, 2.0, 0.0, 2.0};
    tc.bc = BoundarySpec::all(BoundaryKind::wall);
    tc.euler = {1.4, 1.0};
    tc.t_final = 0.75;
    tc.limiter_threshold = 0.001;
    tc.acoustic_startup_steps = 5;
    const bool small = id == "rcs_riemann_small";
    const Primitive inner = small ? Primitive{1.0, 0.0, 0.0, 1.01} : Primitive{1.0, 0.0, 0.0, 1.1};
    const Primitive outer = small ? Primitive{1.9729, 0.0, 0.0, 0.9859} : Primitive{1.7509, 0.0, 0.0, 0.8698};
    tc.initial = [inner, outer](Vec2 x) { return x.x * x.x + x.y * x.y <= 1.4 ? inner : outer; };
  } else if (id == "contact_acoustic") {
    tc.domain = {-5.0, 5.0, -5.0, 5.0};
    tc.bc = BoundarySpec::all(BoundaryKind::dirichlet);
    tc.euler = {1.4, 1.0};
    tc.t_final = 0.35;
    tc.limiter_threshold = 0.1;
    tc.initial = [](Vec2 x) {
      const double r = norm(x);
      const double vel = 2.62 / (5.0 * std::sqrt(2.0));
      const double rho = r <= 2.5 ? 3.85 : 1.0 + 0.1 * std::sin(10.0 * r - 25.0);
      return Primitive{rho, vel, vel, 10.33};
    };
  } else if (id == "gresho_c2" || id == "gresho_classic") {
    tc.domain = {-0.5, 0.5, -0.5, 0.5};
    tc.bc = BoundarySpec::all(BoundaryKind::periodic);
    const double gamma = 5.0 / 3.0;
    tc.euler = {gamma, 1.0};
    const bool c2 = id == "gresho_c2";
    tc.t_final = c2 ? 0.1 : 1.0;
    if (!(params.mach > 0.0)) throw ConfigError("gresho: mach must be positive");
    const double p0 = 1.0 / (gamma * params.mach * params.mach);
    tc.initial = [c2, p0](Vec2 x) {
      const double r = norm(x);
      return c2 ? swirl(x, gresho_c2_velocity(r), p0 + gresho_c2_pressure(r))
                : swirl(x, gresho_classic_velocity(r), p0 + gresho_classic_pressure(r));
    };
    tc.exact = [init = tc.initial](Vec2 x, double) { return init(x); };
  } else if (id == "baroclinic") {
    const double eps = params.baroclinic_eps;
    if (!(eps > 0.0)) throw ConfigError("baroclinic: eps must be positive");
    const double gamma = 1.4;
    const double l = 1.0 / eps;
    const double ly = 2.0 / (5.0 * eps);
    tc.domain = {-l, l, 0.0, ly};
    tc.bc = BoundarySpec::all(BoundaryKind::periodic);
    tc.euler = {gamma, eps};
    tc.t_final = 20.0;
    tc.initial = [eps, gamma, l, ly](Vec2 x) {
      const double wave = 1.0 + std::cos(std::numbers::pi * x.x / l);
      const double phi = x.y <= 0.5 * ly ? 1.8 * x.y / ly : 1.8 * (x.y / ly - 1.0);
      return Primitive{1.0 + eps / 2000.0 * wave + phi, 0.5 * std::sqrt(gamma) * wave, 0.0,
                       1.0 + 0.5 * eps * gamma * wave};
    };
  } else if (id == "constant") {
    tc.domain = {0.0, 1.0, 0.0, 1.0};
    tc.bc = BoundarySpec::all(BoundaryKind::periodic);
    tc.euler = {1.4, 1.0};
    tc.t_final = 0.1;
    tc.initial = [](Vec2) { return Primitive{1.2, 0.3, -0.2, 0.9}; };
    tc.exact = [](Vec2, double) { return Primitive{1.2, 0.3, -0.2, 0.9}; };
  } else {
    throw ConfigError("unknown test case '" + id + "'");
  }
  return tc;
}

Field cell_averages(const Mesh& mesh, const Euler& model, const PrimitiveFn& f, int degree) {
  Field u(model.m(), mesh.num_cells());
  for (int i = 0; i < mesh.num_cells(); ++i) {
    const std::vector<QuadNode> rule = cell_rule(mesh, i, degree);
    double* ui = u.cell(i);
    for (const QuadNode& q : rule) {
      const auto c = model.to_conserved(f(q.x));
      for (int k = 0; k < 4; ++k) ui[k] += q.w * c[k];
    }
  }
  return u;
}

}  // namespace quinpi
