#pragma once

#include <limits>
#include <vector>

#include "quinpi/discretization.hpp"
#include "quinpi/stepper.hpp"

namespace quinpi {

struct LimiterConfig {
  bool enabled = true;
  /// Cells with |S_i| >= threshold are demoted one level.
  double threshold = std::numeric_limits<double>::infinity();
  /// Sweep bound; 0 means 2 * cells + 2.
  int max_sweeps = 0;
  /// Use eta of the cell average instead of the cell mean of eta(R_i).
  bool cell_average_entropy = false;
};

/// Cell means Q(eta(U))_i. With the reconstruction variant, a cell whose
/// reconstruction is not admissible at some node falls back to eta(U_i);
/// an inadmissible average gives NaN.
void entropy_means(const Discretization& disc, const Field& u, bool cell_average, std::vector<double>& q);

/// Demotes cells with |S_i| >= threshold (3 -> 2 -> 1; NaN counts as
/// marked). Returns whether any flag changed.
bool mark_cells(const std::vector<double>& production, double threshold, std::vector<int>& flags);

/// Per-edge cascade level: the lower flag of the two cells.
int edge_level(const Mesh& mesh, const std::vector<int>& flags, int e);

/// Update with per-edge flux families chosen from the flags.
void cascade_update(const Discretization& disc, const StepWorkspace& ws, const std::vector<int>& flags, Field& out);

/// S_i = (Q_new - Q_old)/dt + Xi_i with the entropy fluxes of the same
/// per-edge families as cascade_update.
void entropy_production(const Discretization& disc, const StepWorkspace& ws, const std::vector<int>& flags,
                        const std::vector<double>& q_old, const std::vector<double>& q_new,
                        std::vector<double>& production);

struct LimiterResult {
  Field u;
  std::vector<double> production;
  std::vector<double> q_new;
  std::vector<int> flags;
  int sweeps = 0;
  bool capped = false;
  /// False if some cell average is not admissible after the cascade.
  bool admissible = true;
};

class EntropyLimiter {
 public:
  EntropyLimiter(const Discretization& disc, LimiterConfig config) : disc_(&disc), config_(config) {}

  const LimiterConfig& config() const { return config_; }
  LimiterConfig& config() { return config_; }

  /// The MOOD loop on a completed step. `q_old` holds Q(eta(U^n)).
  LimiterResult run(const StepWorkspace& ws, const std::vector<double>& q_old) const;

 private:
  const Discretization* disc_;
  LimiterConfig config_;
};

}  // namespace quinpi
