#include "quinpi/tableau.hpp"

namespace quinpi {

bool ButcherTableau::stiffly_accurate() const {
  for (int s = 0; s < stages; ++s)
    if (b[s] != a[stages - 1][s]) return false;
  return true;
}

ButcherTableau ButcherTableau::dirk3() {
  const double l = kDirk3Lambda;
  ButcherTableau t;
  t.name = "dirk3";
  t.stages = 3;
  t.order = 3;
  const double b1 = -1.5 * l * l + 4.0 * l - 0.25;
  const double b2 = 1.5 * l * l - 5.0 * l + 1.25;
  t.a = {{l, 0.0, 0.0}, {0.5 * (1.0 - l), l, 0.0}, {b1, b2, l}};
  t.b = {b1, b2, l};
  t.c = {l, 0.5 * (1.0 + l), 1.0};
  // Second-order weights on the same stages. The first weight carries a plus
  // sign so that the row sums to one.
  const double e3 = 0.6636634972904365;
  const double e2 = (1.0 - 2.0 * l) / (1.0 - l) - 2.0 * e3;
  const double e1 = l / (1.0 - l) + e3;
  t.b_embedded = {e1, e2, e3};
  return t;
}

ButcherTableau ButcherTableau::composite_ie() {
  const double l = kDirk3Lambda;
  const double h = 0.5 * (1.0 - l);
  ButcherTableau t;
  t.name = "composite_ie";
  t.stages = 3;
  t.order = 1;
  t.a = {{l, 0.0, 0.0}, {l, h, 0.0}, {l, h, h}};
  t.b = {l, h, h};
  t.c = {l, 0.5 * (1.0 + l), 1.0};
  return t;
}

}  // namespace quinpi
