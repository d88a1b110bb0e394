#include "quinpi/euler.hpp"

#include <cmath>

#include "quinpi/errors.hpp"

namespace quinpi {

void Model::require_admissible(const double* u, int cell) const {
  if (!admissible(u)) throw NonphysicalState("nonphysical state", cell);
}

void Model::source(const double*, double* s) const {
  for (int k = 0; k < m(); ++k) s[k] = 0.0;
}

void Model::source_jacobian(const double*, double* jac) const {
  for (int k = 0; k < m() * m(); ++k) jac[k] = 0.0;
}

Euler::Euler(EulerParams params) : params_(params) {
  if (!(params_.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(params_.eps > 0.0)) throw ConfigError("eps must be positive");
  inv_eps2_ = 1.0 / (params_.eps * params_.eps);
}

double Euler::pressure(const double* u) const {
  const double e2 = params_.eps * params_.eps;
  return (params_.gamma - 1.0) * (u[3] - 0.5 * e2 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
}

bool Euler::admissible(const double* u) const {
  for (int k = 0; k < 4; ++k)
    if (!std::isfinite(u[k])) return false;
  return u[0] > 0.0 && pressure(u) > 0.0;
}

double Euler::sound_speed(const double* u) const {
  const double p = pressure(u);
  if (!(u[0] > 0.0) || !(p > 0.0)) throw NonphysicalState("sound speed of a nonphysical state");
  return std::sqrt(params_.gamma * p / u[0]);
}

Primitive Euler::to_primitive(const double* u) const {
  return {u[0], u[1] / u[0], u[2] / u[0], pressure(u)};
}

std::array<double, 4> Euler::to_conserved(const Primitive& w) const {
  const double e2 = params_.eps * params_.eps;
  return {w.rho, w.rho * w.u, w.rho * w.v,
          w.p / (params_.gamma - 1.0) + 0.5 * e2 * w.rho * (w.u * w.u + w.v * w.v)};
}

void Euler::normal_flux(const double* u, Vec2 n, double* f) const {
  const double p = pressure(u);
  const double un = (u[1] * n.x + u[2] * n.y) / u[0];
  f[0] = u[0] * un;
  f[1] = u[1] * un + p * n.x * inv_eps2_;
  f[2] = u[2] * un + p * n.y * inv_eps2_;
  f[3] = un * (u[3] + p);
}

void Euler::flux_jacobian(const double* u, Vec2 n, double* jac) const {
  const double g1 = params_.gamma - 1.0;
  const double e2 = params_.eps * params_.eps;
  const double rho = u[0];
  const double vx = u[1] / rho;
  const double vy = u[2] / rho;
  const double un = vx * n.x + vy * n.y;
  const double p = pressure(u);
  const double enthalpy = (u[3] + p) / rho;
  // Pressure derivatives with respect to (rho, m_x, m_y, E).
  const double dp[4] = {0.5 * g1 * e2 * (vx * vx + vy * vy), -g1 * e2 * vx, -g1 * e2 * vy, g1};
  const double dun[4] = {-un / rho, n.x / rho, n.y / rho, 0.0};

  jac[0] = 0.0;
  jac[1] = n.x;
  jac[2] = n.y;
  jac[3] = 0.0;
  for (int k = 0; k < 4; ++k) {
    jac[4 + k] = u[1] * dun[k] + n.x * inv_eps2_ * dp[k];
    jac[8 + k] = u[2] * dun[k] + n.y * inv_eps2_ * dp[k];
    jac[12 + k] = rho * enthalpy * dun[k] + un * dp[k];
  }
  jac[5] += un;
  jac[10] += un;
  jac[15] += un;
}

double Euler::max_wavespeed(const double* u, Vec2 n) const {
  return std::abs((u[1] * n.x + u[2] * n.y) / u[0]) + sound_speed(u) / params_.eps;
}

double Euler::spectral_radius(const double* u) const {
  return std::hypot(u[1], u[2]) / u[0] + sound_speed(u) / params_.eps;
}

double Euler::material_speed(const double* u, Vec2 n) const { return std::abs((u[1] * n.x + u[2] * n.y) / u[0]); }

double Euler::material_speed_max(const double* u) const { return std::hypot(u[1], u[2]) / u[0]; }

double Euler::acoustic_speed(const double* u) const { return sound_speed(u) / params_.eps; }

double Euler::entropy(const double* u) const {
  const double p = pressure(u);
  if (!(u[0] > 0.0) || !(p > 0.0)) throw NonphysicalState("entropy of a nonphysical state");
  const double s = std::log(p) - params_.gamma * std::log(u[0]);
  return -u[0] * s / (params_.gamma - 1.0);
}

Vec2 Euler::entropy_flux(const double* u) const {
  const double eta = entropy(u);
  return {eta * u[1] / u[0], eta * u[2] / u[0]};
}

void Euler::entropy_gradient(const double* u, double* g) const {
  const double g1 = params_.gamma - 1.0;
  const double e2 = params_.eps * params_.eps;
  const double rho = u[0];
  const double vx = u[1] / rho;
  const double vy = u[2] / rho;
  const double p = pressure(u);
  const double s = std::log(p) - params_.gamma * std::log(rho);
  const double dp[4] = {0.5 * g1 * e2 * (vx * vx + vy * vy), -g1 * e2 * vx, -g1 * e2 * vy, g1};
  // eta = -rho s / (gamma-1), ds = dp/p - gamma drho/rho.
  g[0] = -s / g1 - rho / g1 * (dp[0] / p - params_.gamma / rho);
  for (int k = 1; k < 4; ++k) g[k] = -rho / g1 * dp[k] / p;
}

void Euler::reflect(const double* u, Vec2 n, double* out) const {
  const double mn = u[1] * n.x + u[2] * n.y;
  out[0] = u[0];
  out[1] = u[1] - 2.0 * mn * n.x;
  out[2] = u[2] - 2.0 * mn * n.y;
  out[3] = u[3];
}

void Euler::reflect_matrix(Vec2 n, double* mat) const {
  for (int k = 0; k < 16; ++k) mat[k] = 0.0;
  mat[0] = 1.0;
  mat[5] = 1.0 - 2.0 * n.x * n.x;
  mat[6] = -2.0 * n.x * n.y;
  mat[9] = -2.0 * n.x * n.y;
  mat[10] = 1.0 - 2.0 * n.y * n.y;
  mat[15] = 1.0;
}

}  // namespace quinpi
