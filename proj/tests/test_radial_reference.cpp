#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acceptance/radial_reference.hpp"

using radial::State;

namespace {

const State kLeft{1.0, 0.0, 1.0};
const State kRight{0.125, 0.0, 0.1};

double planar_l1(int cells) {
  radial::SolverConfig cfg;
  cfg.cells = cells;
  cfg.length = 1.0;
  cfg.cylindrical = false;
  const radial::Profile p = radial::solve(cfg, 0.5, kLeft, kRight, 0.2);
  double e = 0.0;
  for (std::size_t i = 0; i < p.r.size(); ++i)
    e += std::abs(p.rho[i] - radial::exact_riemann(kLeft, kRight, 1.4, (p.r[i] - 0.5) / 0.2).rho);
  return e / cells;
}

}  // namespace

TEST_CASE("exact riemann solution of the sod tube") {
  // Star values of the standard shock tube.
  const State l = radial::exact_riemann(kLeft, kRight, 1.4, 0.5);
  const State r = radial::exact_riemann(kLeft, kRight, 1.4, 1.2);
  CHECK(l.p == doctest::Approx(0.30313).epsilon(1e-4));
  CHECK(l.u == doctest::Approx(0.92745).epsilon(1e-4));
  CHECK(l.rho == doctest::Approx(0.42632).epsilon(1e-4));
  CHECK(r.rho == doctest::Approx(0.26557).epsilon(1e-4));
  CHECK(radial::exact_riemann(kLeft, kRight, 1.4, -2.0).rho == 1.0);
  CHECK(radial::exact_riemann(kLeft, kRight, 1.4, 2.0).rho == 0.125);
  // Inside the left fan the characteristic u - c passes through the origin.
  const State s = radial::exact_riemann(kLeft, kRight, 1.4, -0.5);
  CHECK(s.u - std::sqrt(1.4 * s.p / s.rho) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(s.p / std::pow(s.rho, 1.4) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("planar mode converges to the exact solution") {
  const double coarse = planar_l1(400), fine = planar_l1(1600);
  CHECK(fine < 2e-3);
  // Discontinuities cap the L1 rate near 1 (contact: 1/2 to 1).
  CHECK(coarse / fine > 2.0);
}

TEST_CASE("cylindrical mode") {
  radial::SolverConfig cfg;
  cfg.cells = 600;
  SUBCASE("uniform gas at rest stays at rest") {
    const radial::Profile p = radial::solve(cfg, 0.7, {1.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, 0.1);
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      CHECK(std::abs(p.u[i]) < 1e-13);
      CHECK(p.p[i] == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("mass in the disc is conserved before waves leave") {
    const radial::Profile p0 = radial::solve(cfg, 0.7, kLeft, kRight, 0.0);
    const radial::Profile p1 = radial::solve(cfg, 0.7, kLeft, kRight, 0.2);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < p0.r.size(); ++i) {
      m0 += p0.r[i] * p0.rho[i];
      m1 += p1.r[i] * p1.rho[i];
    }
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-12));
  }
  SUBCASE("waves are ordered and the shock outruns the planar one") {
    const radial::Profile p = radial::solve(cfg, 0.7, kLeft, kRight, 0.2);
    const double contact = p.contact(), shock = p.shock(0.1);
    CHECK(contact > 0.7);
    CHECK(shock > contact);
    // Planar shock speed 1.7522; the diverging shock weakens and slows.
    CHECK(shock < 0.7 + 1.7522 * 0.2);
    CHECK(shock > 0.7 + 0.8 * 1.7522 * 0.2);
  }
}
