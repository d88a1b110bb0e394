#include "quinpi/limiter.hpp"

#include <cmath>
#include <iostream>

#include "quinpi/tableau.hpp"

namespace quinpi {

namespace {

// Stage weights of flux family `level` (1, 2 or 3).
std::array<double, 3> family_weights(int level) {
  static const ButcherTableau dirk = ButcherTableau::dirk3();
  static const ButcherTableau composite = ButcherTableau::composite_ie();
  std::array<double, 3> w{};
  for (int s = 0; s < 3; ++s) {
    if (level >= 3) {
      w[s] = dirk.b[s];
    } else if (level == 2) {
      w[s] = dirk.b_embedded[s];
    } else {
      w[s] = composite.c_increment(s);
    }
  }
  return w;
}

const StageFluxes& family_fluxes(const StepWorkspace& ws, int level, int s) {
  return level >= 2 ? ws.stage_flux[s] : ws.predictor_flux[s];
}

}  // namespace

void entropy_means(const Discretization& disc, const Field& u, bool cell_average, std::vector<double>& q) {
  const Model& model = disc.model();
  const int n = u.n;
  q.assign(n, 0.0);
  for (int i = 0; i < n; ++i) q[i] = model.admissible(u.cell(i)) ? model.entropy(u.cell(i)) : std::nan("");
  if (cell_average) return;

  const Reconstruction& recon = disc.reconstruction();
  const FrozenReconstruction op = recon.freeze(u);
  const QuadratureRules& rules = disc.rules();
  const int m = u.m;
  std::array<double, kMaxComponents> v{};
  for (int i = 0; i < n; ++i) {
    if (std::isnan(q[i])) continue;
    double coef[kMaxComponents][kBasisSize];
    for (int c = 0; c < m; ++c) recon.coefficients(op, i, u, c, coef[c]);
    double sum = 0.0;
    bool ok = true;
    for (const QuadNode& node : rules.cell[i]) {
      const BasisRow phi = recon.basis().evaluate(i, node.x);
      for (int c = 0; c < m; ++c) {
        double val = u(i, c);
        for (int k = 0; k < kBasisSize; ++k) val += phi[k] * coef[c][k];
        v[c] = val;
      }
      if (!model.admissible(v.data())) {
        ok = false;
        break;
      }
      sum += node.w * model.entropy(v.data());
    }
    if (ok) q[i] = sum;
  }
}

bool mark_cells(const std::vector<double>& production, double threshold, std::vector<int>& flags) {
  bool changed = false;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const double s = production[i];
    const bool marked = std::isnan(s) || std::abs(s) >= threshold;
    if (marked && flags[i] > 1) {
      --flags[i];
      changed = true;
    }
  }
  return changed;
}

int edge_level(const Mesh& mesh, const std::vector<int>& flags, int e) {
  const Edge& ed = mesh.edges[e];
  return ed.right >= 0 ? std::min(flags[ed.left], flags[ed.right]) : flags[ed.left];
}

void cascade_update(const Discretization& disc, const StepWorkspace& ws, const std::vector<int>& flags, Field& out) {
  bool all_top = true;
  for (int f : flags) all_top = all_top && f >= 3;
  if (all_top) {
    dirk_update(ws, ButcherTableau::dirk3(), out);
    return;
  }
  const Mesh& mesh = disc.mesh();
  const int m = disc.m();
  const std::array<std::array<double, 3>, 4> w = {family_weights(1), family_weights(1), family_weights(2),
                                                  family_weights(3)};
  Field acc(m, mesh.num_cells());
  std::array<double, kMaxComponents> fe{};
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    const int level = edge_level(mesh, flags, e);
    fe.fill(0.0);
    for (int s = 0; s < 3; ++s) {
      const double* f = family_fluxes(ws, level, s).flux(e);
      for (int c = 0; c < m; ++c) fe[c] += w[level][s] * f[c];
    }
    for (int c = 0; c < m; ++c) acc(ed.left, c) += fe[c];
    if (ed.right >= 0)
      for (int c = 0; c < m; ++c) acc(ed.right, c) -= fe[c];
  }
  out = ws.u0;
  const double dt = ws.dt;
  for (int i = 0; i < mesh.num_cells(); ++i) {
    const int level = flags[i];
    const double inv = 1.0 / mesh.cells[i].area;
    for (int c = 0; c < m; ++c) {
      double src = 0.0;
      for (int s = 0; s < 3; ++s)
        src += w[level][s] * family_fluxes(ws, level, s).cell_source[static_cast<std::size_t>(i) * m + c];
      out(i, c) -= dt * (acc(i, c) * inv - src);
    }
  }
}

void entropy_production(const Discretization& disc, const StepWorkspace& ws, const std::vector<int>& flags,
                        const std::vector<double>& q_old, const std::vector<double>& q_new,
                        std::vector<double>& production) {
  const Mesh& mesh = disc.mesh();
  const int n = mesh.num_cells();
  const std::array<std::array<double, 3>, 4> w = {family_weights(1), family_weights(1), family_weights(2),
                                                  family_weights(3)};
  std::vector<double> xi(n, 0.0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    const int level = edge_level(mesh, flags, e);
    double psi = 0.0;
    for (int s = 0; s < 3; ++s) psi += w[level][s] * family_fluxes(ws, level, s).edge_entropy[e];
    xi[ed.left] += psi;
    if (ed.right >= 0) xi[ed.right] -= psi;
  }
  production.assign(n, 0.0);
  const double dt = ws.dt;
  for (int i = 0; i < n; ++i) {
    const int level = flags[i];
    double src = 0.0;
    for (int s = 0; s < 3; ++s) src += w[level][s] * family_fluxes(ws, level, s).cell_entropy_source[i];
    production[i] = (q_new[i] - q_old[i]) / dt + xi[i] / mesh.cells[i].area - src;
  }
}

LimiterResult EntropyLimiter::run(const StepWorkspace& ws, const std::vector<double>& q_old) const {
  const Discretization& disc = *disc_;
  const int n = disc.num_cells();
  LimiterResult res;
  res.flags.assign(n, 3);
  dirk_update(ws, ButcherTableau::dirk3(), res.u);
  const int bound = config_.max_sweeps > 0 ? config_.max_sweeps : 2 * n + 2;
  for (;;) {
    entropy_means(disc, res.u, config_.cell_average_entropy, res.q_new);
    entropy_production(disc, ws, res.flags, q_old, res.q_new, res.production);
    if (!config_.enabled) break;
    std::vector<int> next = res.flags;
    if (!mark_cells(res.production, config_.threshold, next)) break;
    if (res.sweeps >= bound) {
      // Give up on the cascade: every marked cell goes to the first-order fluxes.
      res.flags = std::move(next);
      for (int& f : res.flags)
        if (f < 3) f = 1;
      res.capped = true;
      std::cerr << "warning: limiter sweep bound " << bound << " reached; flagged cells set to first order\n";
      cascade_update(disc, ws, res.flags, res.u);
      entropy_means(disc, res.u, config_.cell_average_entropy, res.q_new);
      entropy_production(disc, ws, res.flags, q_old, res.q_new, res.production);
      break;
    }
    res.flags = std::move(next);
    cascade_update(disc, ws, res.flags, res.u);
    ++res.sweeps;
  }
  const Model& model = disc.model();
  for (int i = 0; i < n; ++i)
    if (!model.admissible(res.u.cell(i))) res.admissible = false;
  return res;
}

}  // namespace quinpi
