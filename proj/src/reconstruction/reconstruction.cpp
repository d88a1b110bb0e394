#include "quinpi/reconstruction.hpp"

#include <cmath>

#include "quinpi/errors.hpp"

namespace quinpi {

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& v, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) throw DegenerateStencil("all singular values vanish");
  const double cut = rel_tol * s(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) inv(k) = 1.0 / s(k);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

WeightResult nonlinear_weights(const std::vector<double>& indicators, const std::vector<double>& d, double eps) {
  const std::size_t g = indicators.size() - 1;
  WeightResult r;
  r.omega.resize(indicators.size());
  if (g == 0) {
    r.omega[0] = 1.0;
    return r;
  }
  double sum_lin = 0.0;
  for (std::size_t k = 1; k <= g; ++k) sum_lin += indicators[k];
  r.tau = std::abs(static_cast<double>(g) * indicators[0] - sum_lin);
  double total = 0.0;
  for (std::size_t k = 0; k <= g; ++k) {
    const double q = r.tau / (indicators[k] + eps);
    r.omega[k] = d[k] * (1.0 + q * q);
    total += r.omega[k];
  }
  for (double& w : r.omega) w /= total;
  return r;
}

double oscillation_indicator(const Eigen::Matrix<double, kBasisSize, kBasisSize>& m, const Eigen::VectorXd& coef) {
  const Eigen::Index n = coef.size();
  return coef.dot(m.topLeftCorner(n, n) * coef);
}

FrozenReconstruction::FrozenReconstruction(int m, const std::vector<int>& sizes)
    : m_(m), size_(sizes), offset_(sizes.size() + 1, 0) {
  for (std::size_t i = 0; i < sizes.size(); ++i)
    offset_[i + 1] = offset_[i] + static_cast<std::size_t>(kBasisSize) * sizes[i] * m;
  data_.assign(offset_.back(), 0.0);
}

FrozenReconstruction FrozenReconstruction::piecewise_constant(int m, int cells) {
  FrozenReconstruction op(m, std::vector<int>(cells, 0));
  op.first_order_ = true;
  return op;
}

Reconstruction::Reconstruction(const Mesh& mesh, const StencilSet& stencils, const BasisSet& basis,
                               const QuadratureRules& rules, CwenozConfig config)
    : basis_(&basis), config_(config) {
  if (!(config.d0 > 0.0 && config.d0 < 1.0)) throw ConfigError("d0 must lie in (0, 1)");
  const int ncell = mesh.num_cells();
  cells_.resize(ncell);
  for (int i = 0; i < ncell; ++i) {
    const CellStencil& st = stencils[i];
    CellReconstruction& cr = cells_[i];
    const int n = static_cast<int>(st.opt.size()) - 1;
    cr.cells.resize(n);
    cr.v_opt.resize(n, kBasisSize);
    for (int r = 0; r < n; ++r) {
      const StencilMember& mem = st.opt[r + 1];
      cr.cells[r] = mem.cell;
      BasisRow row{};
      for (const QuadNode& q : rules.cell[mem.cell]) {
        const BasisRow phi = basis.evaluate(i, q.x + mem.shift);
        for (int k = 0; k < kBasisSize; ++k) row[k] += q.w * phi[k];
      }
      for (int k = 0; k < kBasisSize; ++k) cr.v_opt(r, k) = row[k];
    }
    try {
      cr.pinv_opt = pseudo_inverse(cr.v_opt);
    } catch (const DegenerateStencil& e) {
      throw DegenerateStencil(std::string(e.what()) + " (optimal stencil of cell " + std::to_string(i) + ")");
    }

    for (const auto& members : st.vertex) {
      std::vector<int> cols;
      for (int p : members)
        if (p != 0) cols.push_back(p - 1);
      Eigen::MatrixXd v(cols.size(), 2);
      for (std::size_t r = 0; r < cols.size(); ++r) v.row(r) = cr.v_opt.block(cols[r], 0, 1, 2);
      try {
        cr.pinv_lin.push_back(pseudo_inverse(v));
      } catch (const DegenerateStencil&) {
        continue;  // a collapsed vertex stencil just drops out
      }
      cr.lin_cols.push_back(std::move(cols));
    }

    const int g = cr.g();
    cr.d.assign(g + 1, 0.0);
    cr.d[0] = g == 0 ? 1.0 : config.d0;
    for (int k = 1; k <= g; ++k) cr.d[k] = (1.0 - config.d0) / g;

    const Cell& cell = mesh.cells[i];
    const double h = cell.h;
    cr.eps = config.eps_scale * h * h;
    Eigen::Matrix<double, kBasisSize, kBasisSize> mat = Eigen::Matrix<double, kBasisSize, kBasisSize>::Zero();
    const Vec2 xc = basis.center[i];
    for (const QuadNode& q : rules.cell[i]) {
      const double X = q.x.x - xc.x;
      const double Y = q.x.y - xc.y;
      Eigen::Matrix<double, kBasisSize, 1> gx;
      Eigen::Matrix<double, kBasisSize, 1> gy;
      gx << 1.0, 0.0, 2.0 * X, 0.0, Y;
      gy << 0.0, 1.0, 0.0, 2.0 * Y, X;
      mat += (q.w * cell.area) * (gx * gx.transpose() + gy * gy.transpose());
    }
    // Second derivatives are constant: P_xx = 2 c3, P_yy = 2 c4, P_xy = c5.
    mat(2, 2) += h * h * cell.area * 4.0;
    mat(3, 3) += h * h * cell.area * 4.0;
    mat(4, 4) += h * h * cell.area;
    cr.indicator = mat;
  }
}

Eigen::VectorXd Reconstruction::differences(int i, const Field& u, int c) const {
  const CellReconstruction& cr = cells_[i];
  Eigen::VectorXd b(cr.size());
  const double ui = u(i, c);
  for (int r = 0; r < cr.size(); ++r) b(r) = u(cr.cells[r], c) - ui;
  return b;
}

WeightResult Reconstruction::weights(int i, const Eigen::VectorXd& b) const {
  const CellReconstruction& cr = cells_[i];
  const int g = cr.g();
  std::vector<double> ind(g + 1);
  ind[0] = oscillation_indicator(cr.indicator, cr.pinv_opt * b);
  for (int k = 0; k < g; ++k) {
    const auto& cols = cr.lin_cols[k];
    Eigen::VectorXd bk(cols.size());
    for (std::size_t r = 0; r < cols.size(); ++r) bk(r) = b(cols[r]);
    ind[k + 1] = oscillation_indicator(cr.indicator, cr.pinv_lin[k] * bk);
  }
  return nonlinear_weights(ind, cr.d, cr.eps);
}

Eigen::MatrixXd Reconstruction::assemble_c_rec(int i, const std::vector<double>& omega) const {
  const CellReconstruction& cr = cells_[i];
  const double scale0 = omega[0] / cr.d[0];
  Eigen::MatrixXd c = scale0 * cr.pinv_opt;
  for (int k = 0; k < cr.g(); ++k) {
    const double wk = omega[k + 1] - scale0 * cr.d[k + 1];
    const auto& cols = cr.lin_cols[k];
    for (std::size_t r = 0; r < cols.size(); ++r) c.block(0, cols[r], 2, 1) += wk * cr.pinv_lin[k].col(r);
  }
  return c;
}

FrozenReconstruction Reconstruction::freeze(const Field& u) const {
  std::vector<int> sizes(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) sizes[i] = cells_[i].size();
  FrozenReconstruction op(u.m, sizes);
  op.omega.resize(cells_.size());
  for (int i = 0; i < num_cells(); ++i) {
    for (int c = 0; c < u.m; ++c) {
      const WeightResult w = weights(i, differences(i, u, c));
      op.c_rec(i, c) = assemble_c_rec(i, w.omega);
      op.omega[i].insert(op.omega[i].end(), w.omega.begin(), w.omega.end());
    }
  }
  return op;
}

FrozenReconstruction Reconstruction::optimal(int m) const {
  std::vector<int> sizes(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) sizes[i] = cells_[i].size();
  FrozenReconstruction op(m, sizes);
  for (int i = 0; i < num_cells(); ++i)
    for (int c = 0; c < m; ++c) op.c_rec(i, c) = cells_[i].pinv_opt;
  return op;
}

void Reconstruction::coefficients(const FrozenReconstruction& op, int i, const Field& u, int c, double* coef) const {
  for (int k = 0; k < kBasisSize; ++k) coef[k] = 0.0;
  if (op.first_order()) return;
  const CellReconstruction& cr = cells_[i];
  const auto C = op.c_rec(i, c);
  const double ui = u(i, c);
  for (int r = 0; r < cr.size(); ++r) {
    const double b = u(cr.cells[r], c) - ui;
    for (int k = 0; k < kBasisSize; ++k) coef[k] += C(k, r) * b;
  }
}

double Reconstruction::evaluate(const FrozenReconstruction& op, int i, const Field& u, int c, Vec2 x) const {
  double coef[kBasisSize];
  coefficients(op, i, u, c, coef);
  const BasisRow phi = basis_->evaluate(i, x);
  double value = u(i, c);
  for (int k = 0; k < kBasisSize; ++k) value += phi[k] * coef[k];
  return value;
}

Eigen::VectorXd Reconstruction::derivative_row(const FrozenReconstruction& op, int i, int c, Vec2 x) const {
  const CellReconstruction& cr = cells_[i];
  Eigen::VectorXd row = Eigen::VectorXd::Zero(cr.size() + 1);
  row(0) = 1.0;
  if (op.first_order()) return row;
  const BasisRow phi = basis_->evaluate(i, x);
  const Eigen::Map<const Eigen::Matrix<double, kBasisSize, 1>> p(phi.data());
  const Eigen::VectorXd w = op.c_rec(i, c).transpose() * p;
  row.tail(cr.size()) = w;
  row(0) = 1.0 - w.sum();
  return row;
}

}  // namespace quinpi
