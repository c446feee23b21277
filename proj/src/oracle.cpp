#include "sensorplace/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sensorplace/errors.hpp"

namespace sensorplace {

namespace {

constexpr double kTol = 1e-12;

double cross2(const Vec3& a, const Vec3& b) { return a.x * b.y - a.y * b.x; }

bool segment_hits_polygon(const Polygon& poly, const Vec3& p, const Vec3& q) {
  const Vec3 d = q - p;
  std::vector<double> cuts{0.0, 1.0};
  const auto& v = poly.vertices;
  const double dd = dot(d, d);
  for (std::size_t e = 0; e < v.size(); ++e) {
    const Vec3& a = v[e];
    const Vec3 edge = v[(e + 1) % v.size()] - a;
    const double denom = cross2(d, edge);
    const Vec3 ap = a - p;
    if (std::abs(denom) > kTol * std::sqrt(dd * dot(edge, edge))) {
      const double t = cross2(ap, edge) / denom;
      const double u = cross2(ap, d) / denom;
      if (u >= -kTol && u <= 1.0 + kTol && t > 0.0 && t < 1.0) cuts.push_back(t);
    } else if (dd > 0.0 && std::abs(cross2(ap, d)) <= kTol * std::sqrt(dd) * (1.0 + norm(ap))) {
      // Collinear: the edge endpoints split the segment.
      for (const Vec3& w : {a, a + edge}) {
        const double t = dot(w - p, d) / dd;
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
    }
  }
  if (dd == 0.0) return poly.contains(p);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= kTol) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (poly.contains(p + d * mid)) return true;
  }
  return false;
}

bool segment_hits_box(const Box& box, const Vec3& p, const Vec3& q) {
  const Vec3 d = q - p;
  double lo = 0.0;
  double hi = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (!(p[a] > box.lower[a] && p[a] < box.upper[a])) return false;
      continue;
    }
    double t0 = (box.lower[a] - p[a]) / d[a];
    double t1 = (box.upper[a] - p[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  return lo < hi - kTol;
}

bool strictly_inside_obstacle(const Environment& env, const Vec3& y) {
  if (env.dim() == 2) {
    for (const auto& poly : env.polygons()) {
      if (poly.contains(y)) return true;
    }
    return false;
  }
  for (const auto& box : env.boxes()) {
    if (box.contains(y)) return true;
  }
  return false;
}

double obstacle_boundary_distance(const Environment& env, const Vec3& y) {
  double best = std::numeric_limits<double>::infinity();
  if (env.dim() == 2) {
    for (const auto& poly : env.polygons()) best = std::min(best, poly.boundary_distance(y));
  } else {
    for (const auto& box : env.boxes()) best = std::min(best, std::abs(box.signed_distance(y)));
  }
  return best;
}

double ray_distance(const Vec3& origin, const Vec3& dir, double length, const Vec3& y) {
  return point_segment_distance(y, origin, origin + dir * length);
}

/// True when y is within `band` of the sector's edges (2D rays or 3D cone surface).
bool near_sector_edge(const Sensor& sensor, int dim, const Vec3& x, const Vec3& y, double band) {
  if (dim == 2) {
    if (sensor.width >= kTwoPi) return false;
    for (double a : {sensor.direction, sensor.direction + sensor.width}) {
      if (ray_distance(x, Vec3{std::cos(a), std::sin(a), 0.0}, sensor.range, y) < band) return true;
    }
    return false;
  }
  if (sensor.width >= kPi) return false;
  const Vec3 d = y - x;
  const double len = norm(d);
  if (len == 0.0) return true;
  const double angle = std::acos(std::clamp(dot(d, sensor_axis(sensor)) / len, -1.0, 1.0));
  const double gap = std::abs(angle - sensor.width);
  return gap < kPi / 2.0 && len * std::sin(gap) < band;
}

/// True when y is within `band` of a shadow line cast by a polygon vertex.
bool near_shadow_2d(const Environment& env, const Vec3& x, double range, const Vec3& y, double band) {
  for (const auto& poly : env.polygons()) {
    for (const Vec3& q : poly.vertices) {
      const Vec3 d = q - x;
      const double len = norm(d);
      if (len == 0.0 || len > range + band) continue;
      if (ray_distance(q, d * (1.0 / len), range, y) < band) return true;
    }
  }
  return false;
}

bool near_shadow_3d(const Environment& env, const Vec3& x, const Vec3& y, double band) {
  const bool here = ray_visible(env, x, y);
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const Vec3 off = normalized(Vec3{double(dx), double(dy), double(dz)}) * band;
        for (double s : {0.5, 1.0}) {
          const Vec3 z = y + off * s;
          if (strictly_inside_obstacle(env, z)) continue;
          if (ray_visible(env, x, z) != here) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

bool ray_visible(const Environment& env, const Vec3& x, const Vec3& y) {
  if (env.dim() == 2) {
    for (const auto& poly : env.polygons()) {
      if (segment_hits_polygon(poly, x, y)) return false;
    }
    return true;
  }
  for (const auto& box : env.boxes()) {
    if (segment_hits_box(box, x, y)) return false;
  }
  return true;
}

bool oracle_covered(const Environment& env, const Sensor& sensor, const Vec3& y) {
  const Vec3 x = sensor_position(env, sensor);
  if (distance(x, y) > sensor.range) return false;
  if (sector_indicator(sensor, env.dim(), x, y) != 1) return false;
  return ray_visible(env, x, y);
}

OracleReport oracle_coverage_check(const Environment& env, const Sensor& sensor, const ScalarField& phi) {
  const Grid& g = env.grid();
  if (!phi.grid.matches(g)) throw GridMismatchError("coverage field grid does not match the environment grid");
  const Vec3 x = sensor_position(env, sensor);
  const double band = 2.0 * g.h;
  const auto w = trapezoid_weights(g);

  OracleReport rep;
  rep.mask = CountField{g, std::vector<int>(g.size(), 0)};
  double excluded_weight = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 y = g.node(n);
    if (strictly_inside_obstacle(env, y)) continue;
    ++rep.free_nodes;
    const double dist = distance(x, y);
    bool excluded = dist < band || std::abs(dist - sensor.range) < band;
    if (!excluded && dist < sensor.range + band) {
      excluded = near_sector_edge(sensor, env.dim(), x, y, band) || obstacle_boundary_distance(env, y) < band;
      if (!excluded) {
        excluded = env.dim() == 2 ? near_shadow_2d(env, x, sensor.range, y, band) : near_shadow_3d(env, x, y, band);
      }
    }
    const bool truth = oracle_covered(env, sensor, y);
    if (excluded) {
      ++rep.excluded;
      rep.mask.values[n] = 2;
      excluded_weight += w[n];
      continue;
    }
    if (truth) rep.area += w[n];
    if (truth == (phi.values[n] > 0.0)) {
      ++rep.agree;
    } else {
      ++rep.disagree;
      rep.mask.values[n] = 1;
    }
  }
  rep.area += 0.5 * excluded_weight;
  rep.area_half_width = 0.5 * excluded_weight;
  return rep;
}

double oracle_area(const Environment& env, std::span<const Sensor> sensors, int refinement) {
  if (refinement < 1) throw ConfigError("refinement factor must be >= 1");
  const Grid& coarse = env.grid();
  Grid fine = coarse;
  fine.h = coarse.h / refinement;
  for (int a = 0; a < coarse.dim; ++a) fine.nodes[a] = (coarse.nodes[a] - 1) * refinement + 1;
  const auto w = trapezoid_weights(fine);

  std::vector<char> covered(fine.size(), 0);
  for (const auto& s : sensors) {
    check_sensor(env, s);
    const Vec3 x = sensor_position(env, s);
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};
    for (int a = 0; a < fine.dim; ++a) {
      lo[a] = std::clamp(static_cast<int>(std::floor((x[a] - s.range - fine.origin[a]) / fine.h)), 0, fine.nodes[a] - 1);
      hi[a] = std::clamp(static_cast<int>(std::ceil((x[a] + s.range - fine.origin[a]) / fine.h)), 0, fine.nodes[a] - 1);
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const std::size_t n = fine.index(i, j, k);
          if (covered[n]) continue;
          const Vec3 y = fine.node(i, j, k);
          if (strictly_inside_obstacle(env, y)) continue;
          if (oracle_covered(env, s, y)) covered[n] = 1;
        }
      }
    }
  }
  double area = 0.0;
  for (std::size_t n = 0; n < fine.size(); ++n) {
    if (covered[n]) area += w[n];
  }
  return area;
}

}  // namespace sensorplace
