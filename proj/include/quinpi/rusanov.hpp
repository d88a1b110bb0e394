#pragma once

#include "quinpi/model.hpp"

namespace quinpi {

/// F(n, v, w) = 1/2 (f(v).n + f(w).n - alpha (w - v)),
/// alpha = max(max_wavespeed(v, n), max_wavespeed(w, n)). Returns alpha.
double rusanov_flux(const Model& model, Vec2 n, const double* v, const double* w, double* flux);

/// Frozen-alpha Jacobians: dF/dv = 1/2 J(v) + alpha/2 I, dF/dw = 1/2 J(w) - alpha/2 I.
/// Returns alpha.
double rusanov_jacobian_approx(const Model& model, Vec2 n, const double* v, const double* w, double* dfdv,
                               double* dfdw);

/// Psi = 1/2 (psi(v) + psi(w)).n - alpha/2 (eta(w) - eta(v)) for a given alpha.
double numerical_entropy_flux(const Model& model, Vec2 n, const double* v, const double* w, double alpha);

/// Same, computing alpha from the states.
double numerical_entropy_flux(const Model& model, Vec2 n, const double* v, const double* w);

}  // namespace quinpi
