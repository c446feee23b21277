#pragma once

#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/visibility.hpp"

namespace testing {

using namespace sensorplace;

inline Domain square_domain(double side, double h) { return Domain{2, Vec3{}, Vec3{side, side, 0.0}, h}; }

inline Environment free_env(double side = 2.0, double h = 0.01) {
  return Environment(square_domain(side, h), std::vector<Polygon>{});
}

inline Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{Vec3{x0, y0}, Vec3{x1, y0}, Vec3{x1, y1}, Vec3{x0, y1}}};
}

inline Polygon regular(double cx, double cy, double radius, int n, double start_deg) {
  Polygon p;
  for (int k = 0; k < n; ++k) {
    const double t = (start_deg + 360.0 * k / n) * kPi / 180.0;
    p.vertices.push_back(Vec3{cx + radius * std::cos(t), cy + radius * std::sin(t)});
  }
  return p;
}

}  // namespace testing
