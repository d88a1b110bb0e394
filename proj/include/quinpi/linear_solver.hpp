#pragma once

#include <Eigen/SparseLU>
#include <memory>
#include <string>
#include <vector>

#include "quinpi/block_sparse.hpp"

namespace quinpi {

enum class LinearSolverKind { automatic, direct, gmres };
enum class PreconditionerKind { none, ilu0, ilu0_compact, lu_compact };

LinearSolverKind linear_solver_from_string(const std::string& name);
PreconditionerKind preconditioner_from_string(const std::string& name);

struct LinearConfig {
  LinearSolverKind kind = LinearSolverKind::automatic;
  PreconditionerKind preconditioner = PreconditionerKind::ilu0_compact;
  /// The *_compact preconditioners add the dropped blocks to the diagonal.
  bool lump = true;
  int restart = 30;
  int max_iter = 300;
  /// `automatic` uses the dense LU up to this many scalar unknowns.
  int direct_max_unknowns = 1024;
};

struct LinearReport {
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Block ILU(0) on the pattern of the matrix it is given.
class BlockIlu0 {
 public:
  void factor(const BlockMatrix& a);
  void apply(const double* r, double* z) const;

 private:
  BlockMatrix lu_;
  std::vector<double> dinv_;
};

/// Right-preconditioned restarted GMRES with a choice of preconditioners,
/// plus a dense LU path for small systems.
class LinearSolver {
 public:
  explicit LinearSolver(LinearConfig config = {}) : config_(config) {}

  const LinearConfig& config() const { return config_; }

  /// Prepares the preconditioner for `a`. `compact` is the pattern used by
  /// the *_compact preconditioners (ignored otherwise, may be null).
  void setup(const BlockMatrix& a, std::shared_ptr<const BlockPattern> compact);

  /// Solves a x = b to relative residual `rel_tol`. setup() must have been
  /// called for `a`.
  LinearReport solve(const BlockMatrix& a, const std::vector<double>& b, std::vector<double>& x, double rel_tol);

  bool uses_direct(const BlockMatrix& a) const;

 private:
  void precondition(const double* r, double* z) const;
  BlockMatrix compact_part(const BlockMatrix& a, std::shared_ptr<const BlockPattern> compact) const;

  LinearConfig config_;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense_;
  BlockIlu0 ilu_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> sparse_lu_;
  PreconditionerKind active_ = PreconditionerKind::none;
  bool direct_ = false;
};

}  // namespace quinpi
