#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "quinpi/basis.hpp"
#include "quinpi/block_sparse.hpp"
#include "quinpi/field.hpp"
#include "quinpi/mesh.hpp"
#include "quinpi/model.hpp"
#include "quinpi/quadrature.hpp"
#include "quinpi/reconstruction.hpp"
#include "quinpi/stencils.hpp"

namespace quinpi {

/// Fluxes of one stage. Edge values are integrated over the edge
/// (|e| sum_q w_q F_q) in the direction of the edge normal.
struct StageFluxes {
  int m = 0;
  std::vector<double> edge_flux;       // edges x m
  std::vector<double> edge_entropy;    // edges; empty unless requested
  std::vector<double> cell_source;     // cells x m, mean source
  std::vector<double> cell_entropy_source;  // cells; grad(eta) . source

  const double* flux(int e) const { return edge_flux.data() + static_cast<std::size_t>(e) * m; }
};

/// Prescribed far-field state as a function of position.
using StateFn = std::function<void(Vec2 x, double* u)>;

/// Space discretization: traces from a frozen reconstruction, Rusanov fluxes
/// at the edge nodes, the flux divergence K and its Jacobian.
///   K_i(U) = 1/|cell i| sum_e o_{e,i} F_e - S(U_i)
class Discretization {
 public:
  Discretization(const Mesh& mesh, const Model& model, const QuadratureRules& rules, const StencilSet& stencils,
                 const BasisSet& basis, const Reconstruction& recon);

  const Mesh& mesh() const { return *mesh_; }
  const Model& model() const { return *model_; }
  const QuadratureRules& rules() const { return *rules_; }
  const Reconstruction& reconstruction() const { return *recon_; }
  int m() const { return m_; }
  int num_cells() const { return mesh_->num_cells(); }

  /// Evaluates the far-field state at every Dirichlet edge node.
  void set_dirichlet(const StateFn& state);

  /// Edge traces at node q of edge e on both sides. For physical boundaries
  /// the right trace is the mirrored or prescribed state.
  void traces(const Field& u, const std::vector<double>& coef, int e, int q, double* ul, double* ur) const;

  /// Per-cell basis coefficients of the reconstruction (cells x m x 5).
  void coefficients(const Field& u, const FrozenReconstruction& op, std::vector<double>& coef) const;

  /// Fills the stage fluxes. Throws NonphysicalState on an invalid trace.
  void evaluate(const Field& u, const FrozenReconstruction& op, StageFluxes& out, bool with_entropy) const;

  /// K from stage fluxes.
  void divergence(const StageFluxes& f, Field& k) const;
  /// Entropy counterpart of K: 1/|cell| sum o Psi - grad(eta).S.
  void entropy_divergence(const StageFluxes& f, std::vector<double>& xi) const;

  /// Convenience: K(U) for the given operator.
  void compute_k(const Field& u, const FrozenReconstruction& op, Field& k) const;

  /// Pattern with face neighbours only (first-order coupling).
  std::shared_ptr<const BlockPattern> compact_pattern() const { return compact_; }
  /// Pattern of the high-order Jacobian: every row couples to the union of
  /// the stencils of the cells sharing an edge with it.
  std::shared_ptr<const BlockPattern> full_pattern() const;

  /// jac = I + theta dK/dU with frozen C_rec and frozen Rusanov alpha. The
  /// matrix must use compact_pattern() for a first-order operator and
  /// full_pattern() otherwise.
  void jacobian(const Field& u, const FrozenReconstruction& op, double theta, BlockMatrix& jac) const;

 private:
  struct EdgePositions {
    // Block indices per stencil position p of side s (0 = left, 1 = right)
    // in the rows of the left and the right cell.
    std::vector<int> row_left[2];
    std::vector<int> row_right[2];
  };

  void build_full_positions() const;
  void weight_row(const FrozenReconstruction& op, int cell, const BasisRow& phi, double* w) const;

  const Mesh* mesh_;
  const Model* model_;
  const QuadratureRules* rules_;
  const StencilSet* stencils_;
  const BasisSet* basis_;
  const Reconstruction* recon_;
  int m_;

  // Basis rows at the edge nodes in the frames of both cells.
  std::vector<std::array<BasisRow, kEdgeNodes>> phi_left_;
  std::vector<std::array<BasisRow, kEdgeNodes>> phi_right_;
  std::vector<double> dirichlet_;  // edges x nodes x m

  std::shared_ptr<const BlockPattern> compact_;
  std::vector<std::array<int, 4>> compact_pos_;  // (L,L) (L,R) (R,L) (R,R)
  mutable std::shared_ptr<const BlockPattern> full_;
  mutable std::vector<EdgePositions> full_pos_;
};

}  // namespace quinpi
