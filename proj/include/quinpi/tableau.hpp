#pragma once

#include <string>
#include <vector>

namespace quinpi {

/// Diagonally implicit Butcher tableau with an optional embedded weight row.
struct ButcherTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<double>> a;  // lower triangular, stages x stages
  std::vector<double> b;
  std::vector<double> b_embedded;  // empty if none
  std::vector<double> c;
  int order = 0;

  bool stiffly_accurate() const;
  /// c_s - c_{s-1} with c_0 = 0.
  double c_increment(int s) const { return c[s] - (s > 0 ? c[s - 1] : 0.0); }

  /// Three-stage, third-order, stiffly accurate DIRK with the embedded
  /// second-order weights.
  static ButcherTableau dirk3();
  /// Composite implicit Euler with sub-steps aligned with dirk3's abscissae.
  static ButcherTableau composite_ie();
};

/// The diagonal coefficient of dirk3().
constexpr double kDirk3Lambda = 0.4358665215;

}  // namespace quinpi
