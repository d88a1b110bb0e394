#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "quinpi/block_sparse.hpp"
#include "quinpi/linear_solver.hpp"

namespace quinpi {

struct NewtonConfig {
  /// Absolute residual tolerance; negative means 1e-10 * sqrt(unknowns).
  double abs_tol = -1.0;
  double rel_tol = 1e-8;
  int max_iter = 50;
  /// Linear solves stop at this fraction of the current residual norm.
  double linear_rel_tol = 1e-3;
  LinearConfig linear;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  int linear_iterations = 0;
  double initial_norm = 0.0;
  double final_norm = 0.0;
  std::string failure;
  std::vector<double> history;
};

/// Residual G(x); may throw NonphysicalState, which counts as a failure.
using ResidualFn = std::function<void(const std::vector<double>& x, std::vector<double>& g)>;
/// Fills the Jacobian (approximation) of G at x into `jac`.
using JacobianFn = std::function<void(const std::vector<double>& x, BlockMatrix& jac)>;

/// Newton-Raphson with inexact linear solves. Converged when
/// ||G|| <= abs_tol + rel_tol ||G(x0)|| (2-norms). `x` holds the initial
/// guess and receives the last iterate.
NewtonReport newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, BlockMatrix& jac,
                          std::shared_ptr<const BlockPattern> compact, std::vector<double>& x,
                          const NewtonConfig& config);

}  // namespace quinpi
