#include "quinpi/basis.hpp"

namespace quinpi {

BasisSet compute_basis_moments(const Mesh& mesh, const QuadratureRules& rules) {
  BasisSet basis;
  const int n = mesh.num_cells();
  basis.center.resize(n);
  basis.shift.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 xc = mesh.cells[i].barycenter;
    basis.center[i] = xc;
    BasisRow s{};
    for (const QuadNode& q : rules.cell[i]) {
      const BasisRow m = monomials(q.x - xc);
      for (int k = 0; k < kBasisSize; ++k) s[k] += q.w * m[k];
    }
    basis.shift[i] = s;
  }
  return basis;
}

}  // namespace quinpi
