#include "radial_reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace radial {

namespace {

using Cons = std::array<double, 4>;  // rho, rho u, E, rho * tracer
using Prim = std::array<double, 4>;  // rho, u, p, tracer

Prim to_prim(const Cons& c, double g) {
  const double u = c[1] / c[0];
  return {c[0], u, (g - 1.0) * (c[2] - 0.5 * c[0] * u * u), c[3] / c[0]};
}

Cons to_cons(const Prim& w, double g) {
  return {w[0], w[0] * w[1], w[2] / (g - 1.0) + 0.5 * w[0] * w[1] * w[1], w[0] * w[3]};
}

// Koren-limited slope: third order where the data are smooth and monotone.
double limited_slope(double back, double fwd) {
  if (back * fwd <= 0.0) return 0.0;
  const double a = std::abs(back), b = std::abs(fwd);
  const double s = std::min({2.0 * b, (a + 2.0 * b) / 3.0, 2.0 * a});
  return back > 0.0 ? s : -s;
}

Cons hll(const Prim& l, const Prim& r, double g) {
  const double cl = std::sqrt(g * l[2] / l[0]), cr = std::sqrt(g * r[2] / r[0]);
  const double sl = std::min(l[1] - cl, r[1] - cr), sr = std::max(l[1] + cl, r[1] + cr);
  const Cons ul = to_cons(l, g), ur = to_cons(r, g);
  auto flux = [](const Prim& w, const Cons& c) {
    return Cons{c[1], c[1] * w[1] + w[2], (c[2] + w[2]) * w[1], c[3] * w[1]};
  };
  const Cons fl = flux(l, ul), fr = flux(r, ur);
  if (sl >= 0.0) return fl;
  if (sr <= 0.0) return fr;
  Cons f;
  for (int k = 0; k < 4; ++k) f[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (ur[k] - ul[k])) / (sr - sl);
  return f;
}

}  // namespace

double Profile::density_at(double x) const {
  if (x <= r.front()) return rho.front();
  if (x >= r.back()) return rho.back();
  const double dr = r[1] - r[0];
  const auto i = static_cast<std::size_t>((x - r.front()) / dr);
  const double s = (x - r[i]) / dr;
  return (1.0 - s) * rho[i] + s * rho[i + 1];
}

double Profile::contact() const {
  for (std::size_t i = r.size() - 1; i > 0; --i)
    if (tracer[i - 1] >= 0.5 && tracer[i] < 0.5)
      return r[i - 1] + (tracer[i - 1] - 0.5) / (tracer[i - 1] - tracer[i]) * (r[i] - r[i - 1]);
  return 0.0;
}

double Profile::shock(double p_outer) const {
  for (std::size_t i = r.size(); i-- > 0;)
    if (p[i] > 1.01 * p_outer) return r[i];
  return 0.0;
}

Profile solve(const SolverConfig& cfg, double r0, State inner, State outer, double t_final) {
  const int n = cfg.cells;
  const double g = cfg.gamma;
  const double dr = cfg.length / n;
  std::vector<double> rc(n), rf(n + 1);
  for (int i = 0; i <= n; ++i) rf[i] = i * dr;
  for (int i = 0; i < n; ++i) rc[i] = (i + 0.5) * dr;

  std::vector<Cons> u(n);
  for (int i = 0; i < n; ++i) {
    // Exact cell fraction inside r0 keeps the initial jump sharp.
    const double f = std::clamp((r0 - rf[i]) / dr, 0.0, 1.0);
    const Prim a{inner.rho, inner.u, inner.p, 1.0}, b{outer.rho, outer.u, outer.p, 0.0};
    const Cons ca = to_cons(a, g), cb = to_cons(b, g);
    for (int k = 0; k < 4; ++k) u[i][k] = f * ca[k] + (1.0 - f) * cb[k];
  }

  // Volume and face weights: r for the cylindrical form, 1 for planar.
  auto weight = [&](double r) { return cfg.cylindrical ? r : 1.0; };

  std::vector<Prim> w(n + 4);
  std::vector<Cons> flux(n + 1);
  auto rhs = [&](const std::vector<Cons>& state, std::vector<Cons>& out) {
    for (int i = 0; i < n; ++i) w[i + 2] = to_prim(state[i], g);
    for (int k = 0; k < 2; ++k) {
      w[1 - k] = w[2 + k];
      w[1 - k][1] = -w[1 - k][1];
      w[n + 2 + k] = w[n + 1];
    }
    for (int f = 0; f <= n; ++f) {
      // Face f sits between padded cells f + 1 and f + 2.
      Prim l, r;
      for (int k = 0; k < 4; ++k) {
        auto at = [&](int j) { return w[j][k]; };
        l[k] = at(f + 1) + 0.5 * limited_slope(at(f + 1) - at(f), at(f + 2) - at(f + 1));
        r[k] = at(f + 2) - 0.5 * limited_slope(at(f + 3) - at(f + 2), at(f + 2) - at(f + 1));
      }
      const Cons h = hll(l, r, g);
      for (int k = 0; k < 4; ++k) flux[f][k] = weight(rf[f]) * h[k];
    }
    out.resize(n);
    for (int i = 0; i < n; ++i) {
      const double vol = weight(rc[i]) * dr;
      for (int k = 0; k < 4; ++k) out[i][k] = -(flux[i + 1][k] - flux[i][k]) / vol;
      // Pressure on the side walls of the annular cell.
      if (cfg.cylindrical) out[i][1] += w[i + 2][2] * (rf[i + 1] - rf[i]) / vol;
    }
  };

  double t = 0.0;
  std::vector<Cons> k1, u1(n), u2(n);
  while (t < t_final) {
    double smax = 0.0;
    for (int i = 0; i < n; ++i) {
      const Prim q = to_prim(u[i], g);
      if (!(q[0] > 0.0 && q[2] > 0.0)) throw std::runtime_error("radial reference: nonphysical state");
      smax = std::max(smax, std::abs(q[1]) + std::sqrt(g * q[2] / q[0]));
    }
    const double dt = std::min(cfg.cfl * dr / smax, t_final - t);
    rhs(u, k1);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 4; ++k) u1[i][k] = u[i][k] + dt * k1[i][k];
    rhs(u1, k1);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 4; ++k) u2[i][k] = 0.75 * u[i][k] + 0.25 * (u1[i][k] + dt * k1[i][k]);
    rhs(u2, k1);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 4; ++k) u[i][k] = (u[i][k] + 2.0 * (u2[i][k] + dt * k1[i][k])) / 3.0;
    t += dt;
  }

  Profile out;
  out.r = rc;
  for (int i = 0; i < n; ++i) {
    const Prim q = to_prim(u[i], g);
    out.rho.push_back(q[0]);
    out.u.push_back(q[1]);
    out.p.push_back(q[2]);
    out.tracer.push_back(q[3]);
  }
  return out;
}

State exact_riemann(State left, State right, double g, double xi) {
  const double cl = std::sqrt(g * left.p / left.rho), cr = std::sqrt(g * right.p / right.rho);
  // Pressure function of one side and its derivative.
  auto side = [g](double p, const State& s, double c, double& df) {
    if (p > s.p) {
      const double a = 2.0 / ((g + 1.0) * s.rho), b = (g - 1.0) / (g + 1.0) * s.p;
      const double q = std::sqrt(a / (p + b));
      df = q * (1.0 - 0.5 * (p - s.p) / (p + b));
      return (p - s.p) * q;
    }
    const double e = (g - 1.0) / (2.0 * g);
    df = std::pow(p / s.p, -(g + 1.0) / (2.0 * g)) / (s.rho * c);
    return 2.0 * c / (g - 1.0) * (std::pow(p / s.p, e) - 1.0);
  };
  double p = 0.5 * (left.p + right.p);
  for (int it = 0; it < 100; ++it) {
    double dl, drr;
    const double f = side(p, left, cl, dl) + side(p, right, cr, drr) + right.u - left.u;
    const double next = std::max(1e-12, p - f / (dl + drr));
    const bool done = std::abs(next - p) < 1e-14 * p;
    p = next;
    if (done) break;
  }
  double dl, drr;
  const double fl = side(p, left, cl, dl), fr = side(p, right, cr, drr);
  const double us = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);

  const double gm = (g - 1.0) / (g + 1.0);
  if (xi < us) {
    if (p > left.p) {
      const double s = left.u - cl * std::sqrt((g + 1.0) / (2.0 * g) * p / left.p + (g - 1.0) / (2.0 * g));
      if (xi < s) return left;
      return {left.rho * (p / left.p + gm) / (gm * p / left.p + 1.0), us, p};
    }
    const double head = left.u - cl;
    const double cs = cl * std::pow(p / left.p, (g - 1.0) / (2.0 * g));
    if (xi < head) return left;
    if (xi > us - cs) return {left.rho * std::pow(p / left.p, 1.0 / g), us, p};
    const double c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (left.u - xi));
    const double rho = left.rho * std::pow(c / cl, 2.0 / (g - 1.0));
    return {rho, 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * left.u + xi), left.p * std::pow(c / cl, 2.0 * g / (g - 1.0))};
  }
  if (p > right.p) {
    const double s = right.u + cr * std::sqrt((g + 1.0) / (2.0 * g) * p / right.p + (g - 1.0) / (2.0 * g));
    if (xi > s) return right;
    return {right.rho * (p / right.p + gm) / (gm * p / right.p + 1.0), us, p};
  }
  const double head = right.u + cr;
  const double cs = cr * std::pow(p / right.p, (g - 1.0) / (2.0 * g));
  if (xi > head) return right;
  if (xi < us + cs) return {right.rho * std::pow(p / right.p, 1.0 / g), us, p};
  const double c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (right.u - xi));
  const double rho = right.rho * std::pow(c / cr, 2.0 / (g - 1.0));
  return {rho, 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * right.u + xi), right.p * std::pow(c / cr, 2.0 * g / (g - 1.0))};
}

}  // namespace radial
