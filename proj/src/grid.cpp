#include "sensorplace/grid.hpp"

#include <algorithm>
#include <cmath>

namespace sensorplace {

std::size_t Grid::nearest(const Vec3& p) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const double f = (p[a] - origin[a]) / h;
    c[a] = std::clamp(static_cast<int>(std::lround(f)), 0, nodes[a] - 1);
  }
  return index(c[0], c[1], c[2]);
}

std::vector<double> trapezoid_weights(const Grid& grid) {
  std::vector<double> w(grid.size());
  const double cell = std::pow(grid.h, grid.dim);
  auto axis_factor = [&](int a, int i) {
    if (a >= grid.dim || grid.nodes[a] == 1) return 1.0;
    return (i == 0 || i == grid.nodes[a] - 1) ? 0.5 : 1.0;
  };
  std::size_t idx = 0;
  for (int k = 0; k < grid.nodes[2]; ++k) {
    const double fz = axis_factor(2, k);
    for (int j = 0; j < grid.nodes[1]; ++j) {
      const double fy = axis_factor(1, j);
      for (int i = 0; i < grid.nodes[0]; ++i) {
        w[idx++] = cell * fz * fy * axis_factor(0, i);
      }
    }
  }
  return w;
}

std::string_view to_string(FieldRole role) {
  switch (role) {
    case FieldRole::Environment:
      return "environment";
    case FieldRole::Coverage:
      return "coverage";
    case FieldRole::Weight:
      return "weight";
    case FieldRole::Other:
      break;
  }
  return "other";
}

double ScalarField::sample(const Vec3& p) const {
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < grid.dim; ++a) {
    const int n = grid.nodes[a];
    double f = (p[a] - grid.origin[a]) / grid.h;
    f = std::clamp(f, 0.0, static_cast<double>(n - 1));
    int i = std::min(static_cast<int>(std::floor(f)), std::max(n - 2, 0));
    base[a] = i;
    frac[a] = n > 1 ? f - i : 0.0;
  }
  double acc = 0.0;
  const int corners = 1 << grid.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> idx = base;
    for (int a = 0; a < grid.dim; ++a) {
      const bool upper = (c >> a) & 1;
      w *= upper ? frac[a] : 1.0 - frac[a];
      if (upper) idx[a] = std::min(idx[a] + 1, grid.nodes[a] - 1);
    }
    if (w != 0.0) acc += w * values[grid.index(idx[0], idx[1], idx[2])];
  }
  return acc;
}

ScalarField resample_nearest(const ScalarField& field, const Grid& target) {
  if (field.grid.matches(target)) return field;
  ScalarField out(target, field.role);
  for (std::size_t n = 0; n < target.size(); ++n) {
    out.values[n] = field.values[field.grid.nearest(target.node(n))];
  }
  return out;
}

}  // namespace sensorplace
