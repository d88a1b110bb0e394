#include "quinpi/rusanov.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace quinpi {

double rusanov_flux(const Model& model, Vec2 n, const double* v, const double* w, double* flux) {
  const int m = model.m();
  std::array<double, kMaxComponents> fv;
  std::array<double, kMaxComponents> fw;
  model.normal_flux(v, n, fv.data());
  model.normal_flux(w, n, fw.data());
  const double alpha = std::max(model.max_wavespeed(v, n), model.max_wavespeed(w, n));
  for (int k = 0; k < m; ++k) flux[k] = 0.5 * (fv[k] + fw[k] - alpha * (w[k] - v[k]));
  return alpha;
}

double rusanov_jacobian_approx(const Model& model, Vec2 n, const double* v, const double* w, double* dfdv,
                               double* dfdw) {
  const int m = model.m();
  model.flux_jacobian(v, n, dfdv);
  model.flux_jacobian(w, n, dfdw);
  const double alpha = std::max(model.max_wavespeed(v, n), model.max_wavespeed(w, n));
  for (int k = 0; k < m * m; ++k) {
    dfdv[k] *= 0.5;
    dfdw[k] *= 0.5;
  }
  for (int k = 0; k < m; ++k) {
    dfdv[k * m + k] += 0.5 * alpha;
    dfdw[k * m + k] -= 0.5 * alpha;
  }
  return alpha;
}

double numerical_entropy_flux(const Model& model, Vec2 n, const double* v, const double* w, double alpha) {
  const Vec2 pv = model.entropy_flux(v);
  const Vec2 pw = model.entropy_flux(w);
  return 0.5 * (dot(pv, n) + dot(pw, n)) - 0.5 * alpha * (model.entropy(w) - model.entropy(v));
}

double numerical_entropy_flux(const Model& model, Vec2 n, const double* v, const double* w) {
  const double alpha = std::max(model.max_wavespeed(v, n), model.max_wavespeed(w, n));
  return numerical_entropy_flux(model, n, v, w, alpha);
}

}  // namespace quinpi
