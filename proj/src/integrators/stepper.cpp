#include "quinpi/stepper.hpp"

#include <algorithm>

#include "quinpi/errors.hpp"

namespace quinpi {

void stage_residual(const Discretization& disc, const Field& b, double theta, const FrozenReconstruction& op,
                    const Field& u, std::vector<double>& g) {
  Field k;
  disc.compute_k(u, op, k);
  g.resize(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) g[j] = u.data[j] - b.data[j] + theta * k.data[j];
}

NewtonReport solve_stage(const Discretization& disc, const Field& b, double theta, const FrozenReconstruction& op,
                         Field& u, BlockMatrix& jac, const NewtonConfig& config) {
  Field scratch(u.m, u.n);
  Field k;
  ResidualFn residual = [&](const std::vector<double>& x, std::vector<double>& g) {
    scratch.data = x;
    disc.compute_k(scratch, op, k);
    g.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) g[j] = x[j] - b.data[j] + theta * k.data[j];
  };
  JacobianFn jacobian = [&](const std::vector<double>& x, BlockMatrix& j) {
    scratch.data = x;
    disc.jacobian(scratch, op, theta, j);
  };
  return newton_solve(residual, jacobian, jac, disc.compact_pattern(), u.data, config);
}

NewtonReport ie_step(const Discretization& disc, const Field& old, double dt, Field& out,
                     const NewtonConfig& config) {
  BlockMatrix jac(disc.compact_pattern(), disc.m());
  out = old;
  return solve_stage(disc, old, dt, FrozenReconstruction::piecewise_constant(disc.m(), disc.num_cells()), out, jac,
                     config);
}

QuinpiStepper::QuinpiStepper(const Discretization& disc, StepperConfig config)
    : disc_(&disc),
      config_(std::move(config)),
      dirk_(ButcherTableau::dirk3()),
      composite_(ButcherTableau::composite_ie()),
      first_order_(FrozenReconstruction::piecewise_constant(disc.m(), disc.num_cells())),
      compact_jac_(disc.compact_pattern(), disc.m()),
      full_jac_(disc.full_pattern(), disc.m()) {}

StepReport QuinpiStepper::run(const Field& un, double dt, StepWorkspace& ws) {
  const Discretization& disc = *disc_;
  const Reconstruction& recon = disc.reconstruction();
  StepReport rep;
  const int attempt = attempts_++;
  const bool inject =
      std::find(config_.fail_attempts.begin(), config_.fail_attempts.end(), attempt) != config_.fail_attempts.end();

  ws.dt = dt;
  ws.u0 = un;
  if (inject) {
    rep.failure = "predictor stage 1: forced Newton failure";
    return rep;
  }
  Field b(un.m, un.n);
  for (int s = 0; s < 3; ++s) {
    // Predictor sub-step from the previous predictor stage.
    const Field& prev = s == 0 ? un : ws.predictor[s - 1];
    ws.predictor[s] = prev;
    const NewtonReport pr = solve_stage(disc, prev, composite_.c_increment(s) * dt, first_order_, ws.predictor[s],
                                        compact_jac_, config_.predictor);
    rep.predictor_iterations[s] = pr.iterations;
    rep.linear_iterations += pr.linear_iterations;
    if (!pr.converged) {
      rep.failure = "predictor stage " + std::to_string(s + 1) + ": " + pr.failure;
      return rep;
    }
    try {
      disc.evaluate(ws.predictor[s], first_order_, ws.predictor_flux[s], true);
    } catch (const NonphysicalState& e) {
      rep.failure = std::string("predictor stage fluxes: ") + e.what();
      return rep;
    }
    disc.divergence(ws.predictor_flux[s], ws.predictor_k[s]);

    // Corrector stage with weights frozen on the predictor.
    ws.ops[s] = recon.freeze(ws.predictor[s]);
    b = un;
    for (int l = 0; l < s; ++l) {
      const double f = dt * dirk_.a[s][l];
      for (std::size_t j = 0; j < b.size(); ++j) b.data[j] -= f * ws.k[l].data[j];
    }
    ws.stage[s] = ws.predictor[s];
    const NewtonReport cr = solve_stage(disc, b, dirk_.a[s][s] * dt, ws.ops[s], ws.stage[s], full_jac_,
                                        config_.corrector);
    rep.corrector_iterations[s] = cr.iterations;
    rep.linear_iterations += cr.linear_iterations;
    if (!cr.converged) {
      rep.failure = "corrector stage " + std::to_string(s + 1) + ": " + cr.failure;
      return rep;
    }
    try {
      disc.evaluate(ws.stage[s], ws.ops[s], ws.stage_flux[s], true);
    } catch (const NonphysicalState& e) {
      rep.failure = std::string("corrector stage fluxes: ") + e.what();
      return rep;
    }
    disc.divergence(ws.stage_flux[s], ws.k[s]);
  }
  rep.ok = true;
  return rep;
}

void weighted_update(const Field& un, double dt, const std::vector<double>& weights, const std::array<Field, 3>& k,
                     Field& out) {
  out = un;
  for (std::size_t s = 0; s < weights.size(); ++s) {
    const double f = dt * weights[s];
    for (std::size_t j = 0; j < out.size(); ++j) out.data[j] -= f * k[s].data[j];
  }
}

void dirk_update(const StepWorkspace& ws, const ButcherTableau& t, Field& out) {
  weighted_update(ws.u0, ws.dt, t.b, ws.k, out);
}

void predictor_update(const StepWorkspace& ws, const ButcherTableau& composite, Field& out) {
  std::vector<double> w(composite.stages);
  for (int s = 0; s < composite.stages; ++s) w[s] = composite.c_increment(s);
  weighted_update(ws.u0, ws.dt, w, ws.predictor_k, out);
}

}  // namespace quinpi
