#include "quinpi/newton.hpp"

#include <cmath>

#include "quinpi/errors.hpp"

namespace quinpi {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

}  // namespace

NewtonReport newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, BlockMatrix& jac,
                          std::shared_ptr<const BlockPattern> compact, std::vector<double>& x,
                          const NewtonConfig& config) {
  NewtonReport rep;
  const double abs_tol = config.abs_tol >= 0.0 ? config.abs_tol : 1e-10 * std::sqrt(static_cast<double>(x.size()));
  std::vector<double> g(x.size());
  std::vector<double> dx;
  std::vector<double> rhs(x.size());
  LinearSolver solver(config.linear);
  try {
    residual(x, g);
    rep.initial_norm = norm2(g);
    rep.final_norm = rep.initial_norm;
    rep.history.push_back(rep.initial_norm);
    const double target = abs_tol + config.rel_tol * rep.initial_norm;
    if (rep.initial_norm <= abs_tol) {
      rep.converged = true;
      return rep;
    }
    for (int it = 0; it < config.max_iter; ++it) {
      jacobian(x, jac);
      solver.setup(jac, compact);
      for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = -g[k];
      const LinearReport lin = solver.solve(jac, rhs, dx, config.linear_rel_tol);
      rep.linear_iterations += lin.iterations;
      for (std::size_t k = 0; k < x.size(); ++k) x[k] += dx[k];
      rep.iterations = it + 1;
      residual(x, g);
      rep.final_norm = norm2(g);
      rep.history.push_back(rep.final_norm);
      if (!std::isfinite(rep.final_norm)) {
        rep.failure = "residual is not finite";
        return rep;
      }
      if (rep.final_norm <= target) {
        rep.converged = true;
        return rep;
      }
    }
    rep.failure = "no convergence in " + std::to_string(config.max_iter) + " iterations";
  } catch (const NonphysicalState& e) {
    rep.failure = e.what();
  } catch (const SolverAbort& e) {
    rep.failure = e.what();
  }
  return rep;
}

}  // namespace quinpi
