#pragma once

#include <vector>

namespace quinpi {

/// Cell averages of m conserved quantities, stored cell-major.
struct Field {
  int m = 0;
  int n = 0;
  std::vector<double> data;

  Field() = default;
  Field(int components, int cells, double value = 0.0)
      : m(components), n(cells), data(static_cast<std::size_t>(components) * cells, value) {}

  double* cell(int i) { return data.data() + static_cast<std::size_t>(i) * m; }
  const double* cell(int i) const { return data.data() + static_cast<std::size_t>(i) * m; }
  double& operator()(int i, int c) { return data[static_cast<std::size_t>(i) * m + c]; }
  double operator()(int i, int c) const { return data[static_cast<std::size_t>(i) * m + c]; }
  std::size_t size() const { return data.size(); }
};

}  // namespace quinpi
