#include "quinpi/discretization.hpp"

#include <stdexcept>

#include "quinpi/errors.hpp"
#include "quinpi/rusanov.hpp"

namespace quinpi {

namespace {

using Scratch = std::array<double, kMaxComponents>;
using ScratchMat = std::array<double, kMaxComponents * kMaxComponents>;

void add_scaled_block(double* dst, const double* src, double s, int m) {
  for (int k = 0; k < m * m; ++k) dst[k] += s * src[k];
}

}  // namespace

Discretization::Discretization(const Mesh& mesh, const Model& model, const QuadratureRules& rules,
                               const StencilSet& stencils, const BasisSet& basis, const Reconstruction& recon)
    : mesh_(&mesh),
      model_(&model),
      rules_(&rules),
      stencils_(&stencils),
      basis_(&basis),
      recon_(&recon),
      m_(model.m()) {
  if (m_ > kMaxComponents) throw ConfigError("model has too many components");
  const int ne = mesh.num_edges();
  phi_left_.resize(ne);
  phi_right_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = mesh.edges[e];
    for (int q = 0; q < kEdgeNodes; ++q) {
      const Vec2 x = rules.edge[e][q].x;
      phi_left_[e][q] = basis.evaluate(ed.left, x);
      if (ed.right >= 0) phi_right_[e][q] = basis.evaluate(ed.right, x + ed.right_offset);
    }
  }
  dirichlet_.assign(static_cast<std::size_t>(ne) * kEdgeNodes * m_, 0.0);

  std::vector<std::vector<int>> rows(mesh.num_cells());
  for (const Edge& ed : mesh.edges) {
    if (ed.right < 0) continue;
    rows[ed.left].push_back(ed.right);
    rows[ed.right].push_back(ed.left);
  }
  auto compact = std::make_shared<BlockPattern>(BlockPattern::from_rows(std::move(rows)));
  compact_pos_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = mesh.edges[e];
    const int l = ed.left;
    const int r = ed.right;
    compact_pos_[e] = {compact->find(l, l), r >= 0 ? compact->find(l, r) : -1, r >= 0 ? compact->find(r, l) : -1,
                       r >= 0 ? compact->find(r, r) : -1};
  }
  compact_ = std::move(compact);
}

void Discretization::set_dirichlet(const StateFn& state) {
  for (int e = 0; e < mesh_->num_edges(); ++e) {
    if (mesh_->edges[e].kind != BoundaryKind::dirichlet) continue;
    for (int q = 0; q < kEdgeNodes; ++q) {
      double* dst = dirichlet_.data() + (static_cast<std::size_t>(e) * kEdgeNodes + q) * m_;
      state(rules_->edge[e][q].x, dst);
      model_->require_admissible(dst);
    }
  }
}

void Discretization::coefficients(const Field& u, const FrozenReconstruction& op, std::vector<double>& coef) const {
  if (op.first_order()) {
    coef.clear();
    return;
  }
  const int n = num_cells();
  coef.assign(static_cast<std::size_t>(n) * m_ * kBasisSize, 0.0);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < m_; ++c)
      recon_->coefficients(op, i, u, c, coef.data() + (static_cast<std::size_t>(i) * m_ + c) * kBasisSize);
}

void Discretization::traces(const Field& u, const std::vector<double>& coef, int e, int q, double* ul,
                            double* ur) const {
  const Edge& ed = mesh_->edges[e];
  const int l = ed.left;
  const int r = ed.right;
  const bool high = !coef.empty();
  for (int c = 0; c < m_; ++c) {
    double v = u(l, c);
    if (high) {
      const double* a = coef.data() + (static_cast<std::size_t>(l) * m_ + c) * kBasisSize;
      for (int k = 0; k < kBasisSize; ++k) v += phi_left_[e][q][k] * a[k];
    }
    ul[c] = v;
  }
  if (r >= 0) {
    for (int c = 0; c < m_; ++c) {
      double v = u(r, c);
      if (high) {
        const double* a = coef.data() + (static_cast<std::size_t>(r) * m_ + c) * kBasisSize;
        for (int k = 0; k < kBasisSize; ++k) v += phi_right_[e][q][k] * a[k];
      }
      ur[c] = v;
    }
  } else if (ed.kind == BoundaryKind::wall) {
    model_->reflect(ul, ed.normal, ur);
  } else {
    const double* d = dirichlet_.data() + (static_cast<std::size_t>(e) * kEdgeNodes + q) * m_;
    for (int c = 0; c < m_; ++c) ur[c] = d[c];
  }
}

void Discretization::evaluate(const Field& u, const FrozenReconstruction& op, StageFluxes& out,
                              bool with_entropy) const {
  const int ne = mesh_->num_edges();
  const int nc = num_cells();
  out.m = m_;
  out.edge_flux.assign(static_cast<std::size_t>(ne) * m_, 0.0);
  out.edge_entropy.assign(with_entropy ? ne : 0, 0.0);
  out.cell_source.assign(static_cast<std::size_t>(nc) * m_, 0.0);
  out.cell_entropy_source.assign(with_entropy ? nc : 0, 0.0);

  for (int i = 0; i < nc; ++i) model_->require_admissible(u.cell(i), i);

  std::vector<double> coef;
  coefficients(u, op, coef);
  Scratch ul{};
  Scratch ur{};
  Scratch f{};
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = mesh_->edges[e];
    double* fe = out.edge_flux.data() + static_cast<std::size_t>(e) * m_;
    for (int q = 0; q < kEdgeNodes; ++q) {
      traces(u, coef, e, q, ul.data(), ur.data());
      model_->require_admissible(ul.data(), ed.left);
      model_->require_admissible(ur.data(), ed.right >= 0 ? ed.right : ed.left);
      const double alpha = rusanov_flux(*model_, ed.normal, ul.data(), ur.data(), f.data());
      const double w = ed.length * rules_->edge[e][q].w;
      for (int c = 0; c < m_; ++c) fe[c] += w * f[c];
      if (with_entropy)
        out.edge_entropy[e] += w * numerical_entropy_flux(*model_, ed.normal, ul.data(), ur.data(), alpha);
    }
  }

  if (model_->has_source()) {
    Scratch s{};
    Scratch g{};
    for (int i = 0; i < nc; ++i) {
      model_->source(u.cell(i), s.data());
      for (int c = 0; c < m_; ++c) out.cell_source[static_cast<std::size_t>(i) * m_ + c] = s[c];
      if (with_entropy) {
        model_->entropy_gradient(u.cell(i), g.data());
        double dot_gs = 0.0;
        for (int c = 0; c < m_; ++c) dot_gs += g[c] * s[c];
        out.cell_entropy_source[i] = dot_gs;
      }
    }
  }
}

void Discretization::divergence(const StageFluxes& f, Field& k) const {
  const int nc = num_cells();
  if (k.m != m_ || k.n != nc) k = Field(m_, nc);
  std::fill(k.data.begin(), k.data.end(), 0.0);
  for (int e = 0; e < mesh_->num_edges(); ++e) {
    const Edge& ed = mesh_->edges[e];
    const double* fe = f.flux(e);
    for (int c = 0; c < m_; ++c) k(ed.left, c) += fe[c];
    if (ed.right >= 0)
      for (int c = 0; c < m_; ++c) k(ed.right, c) -= fe[c];
  }
  for (int i = 0; i < nc; ++i) {
    const double inv = 1.0 / mesh_->cells[i].area;
    for (int c = 0; c < m_; ++c) k(i, c) = k(i, c) * inv - f.cell_source[static_cast<std::size_t>(i) * m_ + c];
  }
}

void Discretization::entropy_divergence(const StageFluxes& f, std::vector<double>& xi) const {
  const int nc = num_cells();
  if (f.edge_entropy.empty()) throw std::logic_error("entropy fluxes were not computed for this stage");
  xi.assign(nc, 0.0);
  for (int e = 0; e < mesh_->num_edges(); ++e) {
    const Edge& ed = mesh_->edges[e];
    xi[ed.left] += f.edge_entropy[e];
    if (ed.right >= 0) xi[ed.right] -= f.edge_entropy[e];
  }
  for (int i = 0; i < nc; ++i) xi[i] = xi[i] / mesh_->cells[i].area - f.cell_entropy_source[i];
}

void Discretization::compute_k(const Field& u, const FrozenReconstruction& op, Field& k) const {
  StageFluxes f;
  evaluate(u, op, f, false);
  divergence(f, k);
}

std::shared_ptr<const BlockPattern> Discretization::full_pattern() const {
  build_full_positions();
  return full_;
}

void Discretization::build_full_positions() const {
  if (full_) return;
  const Mesh& mesh = *mesh_;
  const int nc = mesh.num_cells();
  auto members = [&](int cell, std::vector<int>& out) {
    out.push_back(cell);
    const auto& cells = recon_->cell(cell).cells;
    out.insert(out.end(), cells.begin(), cells.end());
  };
  std::vector<std::vector<int>> rows(nc);
  for (const Edge& ed : mesh.edges) {
    std::vector<int> cols;
    members(ed.left, cols);
    if (ed.right >= 0) members(ed.right, cols);
    rows[ed.left].insert(rows[ed.left].end(), cols.begin(), cols.end());
    if (ed.right >= 0) rows[ed.right].insert(rows[ed.right].end(), cols.begin(), cols.end());
  }
  auto pattern = std::make_shared<BlockPattern>(BlockPattern::from_rows(std::move(rows)));

  full_pos_.assign(mesh.num_edges(), {});
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    EdgePositions& pos = full_pos_[e];
    for (int side = 0; side < 2; ++side) {
      const int owner = side == 0 ? ed.left : ed.right;
      if (owner < 0) continue;
      std::vector<int> cols;
      members(owner, cols);
      for (int col : cols) {
        pos.row_left[side].push_back(pattern->find(ed.left, col));
        pos.row_right[side].push_back(ed.right >= 0 ? pattern->find(ed.right, col) : -1);
      }
    }
  }
  full_ = std::move(pattern);
}

void Discretization::weight_row(const FrozenReconstruction& op, int cell, const BasisRow& phi, double* w) const {
  const int n = op.stencil_size(cell);
  const Eigen::Map<const Eigen::Matrix<double, kBasisSize, 1>> p(phi.data());
  for (int c = 0; c < m_; ++c) {
    double* wc = w + static_cast<std::size_t>(c) * (n + 1);
    Eigen::Map<Eigen::VectorXd> tail(wc + 1, n);
    tail.noalias() = op.c_rec(cell, c).transpose() * p;
    wc[0] = 1.0 - tail.sum();
  }
}

void Discretization::jacobian(const Field& u, const FrozenReconstruction& op, double theta, BlockMatrix& jac) const {
  const bool first = op.first_order();
  if (!first) build_full_positions();
  if (jac.pattern_ptr() != (first ? compact_ : full_))
    throw std::logic_error("jacobian: matrix pattern does not match the operator");
  jac.set_zero();
  jac.add_identity(1.0);

  const Mesh& mesh = *mesh_;
  const int m = m_;
  std::vector<double> coef;
  coefficients(u, op, coef);
  Scratch ul{};
  Scratch ur{};
  ScratchMat al{};
  ScratchMat ar{};
  ScratchMat rmat{};
  ScratchMat tmp{};
  std::vector<double> w;
  std::vector<double> blk(static_cast<std::size_t>(m) * m);

  // Adds the contribution of the trace on one side of edge e, whose flux
  // derivative with respect to that trace is `a`.
  auto scatter = [&](int e, int side, int owner, const BasisRow& phi, const double* a, double sl, double sr) {
    const Edge& ed = mesh.edges[e];
    if (first) {
      const auto& cp = compact_pos_[e];
      const int kl = side == 0 ? cp[0] : cp[1];
      add_scaled_block(jac.block(kl), a, sl, m);
      if (ed.right >= 0) add_scaled_block(jac.block(side == 0 ? cp[2] : cp[3]), a, -sr, m);
      return;
    }
    const int n = op.stencil_size(owner);
    w.resize(static_cast<std::size_t>(m) * (n + 1));
    weight_row(op, owner, phi, w.data());
    const EdgePositions& pos = full_pos_[e];
    for (int p = 0; p <= n; ++p) {
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) blk[r * m + c] = a[r * m + c] * w[static_cast<std::size_t>(c) * (n + 1) + p];
      add_scaled_block(jac.block(pos.row_left[side][p]), blk.data(), sl, m);
      if (ed.right >= 0) add_scaled_block(jac.block(pos.row_right[side][p]), blk.data(), -sr, m);
    }
  };

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    const double inv_l = 1.0 / mesh.cells[ed.left].area;
    const double inv_r = ed.right >= 0 ? 1.0 / mesh.cells[ed.right].area : 0.0;
    if (ed.kind == BoundaryKind::wall) model_->reflect_matrix(ed.normal, rmat.data());
    for (int q = 0; q < kEdgeNodes; ++q) {
      traces(u, coef, e, q, ul.data(), ur.data());
      rusanov_jacobian_approx(*model_, ed.normal, ul.data(), ur.data(), al.data(), ar.data());
      const double s = theta * ed.length * rules_->edge[e][q].w;
      if (ed.kind == BoundaryKind::wall) {
        // The mirrored state depends linearly on the inner trace.
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int k = 0; k < m; ++k) acc += ar[r * m + k] * rmat[k * m + c];
            tmp[r * m + c] = acc;
          }
        for (int k = 0; k < m * m; ++k) al[k] += tmp[k];
      }
      scatter(e, 0, ed.left, phi_left_[e][q], al.data(), s * inv_l, s * inv_r);
      if (ed.right >= 0) scatter(e, 1, ed.right, phi_right_[e][q], ar.data(), s * inv_l, s * inv_r);
    }
  }

  if (model_->has_source()) {
    const BlockPattern& pat = jac.pattern();
    for (int i = 0; i < num_cells(); ++i) {
      model_->source_jacobian(u.cell(i), tmp.data());
      add_scaled_block(jac.block(pat.diag[i]), tmp.data(), -theta, m);
    }
  }
}

}  // namespace quinpi
