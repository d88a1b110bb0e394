#pragma once

#include <array>
#include <vector>

#include "quinpi/mesh.hpp"
#include "quinpi/quadrature.hpp"

namespace quinpi {

constexpr int kBasisSize = 5;
using BasisRow = std::array<double, kBasisSize>;

/// Monomials {X, Y, X^2, Y^2, XY} of the offset X = x - x_i.
inline BasisRow monomials(Vec2 offset) {
  const double X = offset.x;
  const double Y = offset.y;
  return {X, Y, X * X, Y * Y, X * Y};
}

/// Zero-mean polynomial basis of every cell: phi_{i,k}(x) = mono_k(x - x_i) - s_{i,k}.
struct BasisSet {
  std::vector<Vec2> center;
  std::vector<BasisRow> shift;

  BasisRow evaluate(int cell, Vec2 x) const {
    BasisRow r = monomials(x - center[cell]);
    for (int k = 0; k < kBasisSize; ++k) r[k] -= shift[cell][k];
    return r;
  }
};

BasisSet compute_basis_moments(const Mesh& mesh, const QuadratureRules& rules);

}  // namespace quinpi
