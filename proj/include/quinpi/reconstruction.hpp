#pragma once

#include <Eigen/Dense>
#include <vector>

#include "quinpi/basis.hpp"
#include "quinpi/field.hpp"
#include "quinpi/mesh.hpp"
#include "quinpi/quadrature.hpp"
#include "quinpi/stencils.hpp"

namespace quinpi {

struct CwenozConfig {
  double d0 = 0.75;
  /// eps_reg = eps_scale * h_i^2.
  double eps_scale = 1.0;
};

/// Moore-Penrose inverse by SVD; singular values below rel_tol * sigma_max are
/// dropped. Throws DegenerateStencil if nothing survives.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& v, double rel_tol = 1e-12);

struct WeightResult {
  std::vector<double> omega;
  double tau = 0.0;
};

/// CWENOZ weights from indicators I_0 (optimal) .. I_g and linear weights d_0..d_g.
WeightResult nonlinear_weights(const std::vector<double>& indicators, const std::vector<double>& d, double eps);

/// Everything the reconstruction on one cell needs, independent of the data.
struct CellReconstruction {
  /// Global cell index of stencil positions 1..n (position 0 is the cell).
  std::vector<int> cells;
  Eigen::MatrixXd v_opt;   // n x 5, cell averages of the basis over the members
  Eigen::MatrixXd pinv_opt;  // 5 x n
  /// Linear vertex polynomials: pseudo-inverse (2 x n_k) and member columns (0..n-1).
  std::vector<Eigen::MatrixXd> pinv_lin;
  std::vector<std::vector<int>> lin_cols;
  /// Indicator quadratic form on the basis coefficients.
  Eigen::Matrix<double, kBasisSize, kBasisSize> indicator;
  std::vector<double> d;  // d_0 .. d_g
  double eps = 0.0;

  int size() const { return static_cast<int>(cells.size()); }
  int g() const { return static_cast<int>(pinv_lin.size()); }
};

/// The reconstruction operator with weights frozen on some data: one
/// n_B x n matrix C_rec per cell and component, so that
/// R_i(x) = U_i + phi_i(x)^T C_rec b with b_j = U_j - U_i.
class FrozenReconstruction {
 public:
  FrozenReconstruction() = default;
  FrozenReconstruction(int m, const std::vector<int>& sizes);

  int m() const { return m_; }
  bool first_order() const { return first_order_; }
  static FrozenReconstruction piecewise_constant(int m, int cells);

  Eigen::Map<Eigen::MatrixXd> c_rec(int cell, int comp) {
    return {data_.data() + offset_[cell] + comp * kBasisSize * size_[cell], kBasisSize, size_[cell]};
  }
  Eigen::Map<const Eigen::MatrixXd> c_rec(int cell, int comp) const {
    return {data_.data() + offset_[cell] + comp * kBasisSize * size_[cell], kBasisSize, size_[cell]};
  }
  int stencil_size(int cell) const { return size_[cell]; }

  /// Stored nonlinear weights for diagnostics (cell-major, m blocks of g+1).
  std::vector<std::vector<double>> omega;

 private:
  int m_ = 0;
  bool first_order_ = false;
  std::vector<int> size_;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

class Reconstruction {
 public:
  Reconstruction(const Mesh& mesh, const StencilSet& stencils, const BasisSet& basis, const QuadratureRules& rules,
                 CwenozConfig config = {});

  int num_cells() const { return static_cast<int>(cells_.size()); }
  const CellReconstruction& cell(int i) const { return cells_[i]; }
  const BasisSet& basis() const { return *basis_; }
  const CwenozConfig& config() const { return config_; }

  /// Nonlinear weights of one cell for one scalar component; `b` holds U_j - U_i.
  WeightResult weights(int i, const Eigen::VectorXd& b) const;

  /// C_rec for given weights (omega_0 .. omega_g).
  Eigen::MatrixXd assemble_c_rec(int i, const std::vector<double>& omega) const;

  /// Freeze the nonlinear weights on the data `u`.
  FrozenReconstruction freeze(const Field& u) const;
  /// Linear weights everywhere (omega = d), so C_rec = pinv_opt.
  FrozenReconstruction optimal(int m) const;

  /// Differences b_j = U_j - U_i over the stencil of cell i for component c.
  Eigen::VectorXd differences(int i, const Field& u, int c) const;

  /// Basis coefficients C_rec b of cell i, component c.
  void coefficients(const FrozenReconstruction& op, int i, const Field& u, int c, double* coef) const;

  /// Value of the reconstruction of component c on cell i at x.
  double evaluate(const FrozenReconstruction& op, int i, const Field& u, int c, Vec2 x) const;

  /// Derivatives of the point value with respect to the stencil averages:
  /// entry 0 for the cell itself, entries 1..n for cell(i).cells.
  Eigen::VectorXd derivative_row(const FrozenReconstruction& op, int i, int c, Vec2 x) const;

 private:
  const BasisSet* basis_;
  CwenozConfig config_;
  std::vector<CellReconstruction> cells_;
};

/// Jiang-Shu type indicator u^T M u of a coefficient vector (length 2 or 5).
double oscillation_indicator(const Eigen::Matrix<double, kBasisSize, kBasisSize>& m, const Eigen::VectorXd& coef);

}  // namespace quinpi
