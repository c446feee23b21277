#include "sensorplace/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

Sensor Sensor::fixed(Vec3 point, double range, double direction, double width, double failure) {
  Sensor s;
  s.kind = LocationKind::Fixed;
  s.point = point;
  s.range = range;
  s.direction = direction;
  s.width = width;
  s.failure = failure;
  s.location_adjustable = false;
  return s;
}

Sensor Sensor::on_boundary(BoundaryParam bp, double range, double direction, double width, double failure,
                           bool movable) {
  Sensor s;
  s.kind = LocationKind::Boundary;
  s.boundary = bp;
  s.range = range;
  s.direction = direction;
  s.width = width;
  s.failure = failure;
  s.location_adjustable = movable;
  return s;
}

Vec3 sensor_position(const Environment& env, const Sensor& sensor) {
  if (sensor.kind == LocationKind::Fixed) {
    Vec3 p = sensor.point;
    if (env.dim() == 2) p.z = 0.0;
    return p;
  }
  return env.standoff_point(sensor.boundary);
}

Vec3 sensor_axis(const Sensor& sensor) {
  return axis_from_angles(sensor.direction, std::clamp(sensor.polar, kPolarClamp, kPi - kPolarClamp));
}

void check_sensor(const Environment& env, const Sensor& sensor) {
  if (!(sensor.range > 0.0) || !std::isfinite(sensor.range)) throw ConfigError("sensor range must be positive");
  if (!(sensor.width > 0.0)) throw ConfigError("sensor width must be positive");
  if (!(sensor.failure >= 0.0 && sensor.failure < 1.0)) throw ConfigError("failure probability must lie in [0, 1)");
  if (!std::isfinite(sensor.direction) || !std::isfinite(sensor.polar)) {
    throw ConfigError("sensor direction is not finite");
  }
  const Vec3 x = sensor_position(env, sensor);
  if (!env.domain().contains(x, 1e-12)) throw InfeasibleError("sensor lies outside the domain");
  if (!(env.signed_distance(x) > 0.0)) throw InfeasibleError("sensor lies inside or on an obstacle");
}

bool is_feasible(const Environment& env, const Sensor& sensor) {
  try {
    check_sensor(env, sensor);
  } catch (const Error&) {
    return false;
  }
  return true;
}

int sector_indicator(const Sensor& sensor, int dim, const Vec3& x, const Vec3& y) {
  const Vec3 d = y - x;
  if (dim == 2) {
    if (sensor.width >= kTwoPi) return 1;
    if (d.x == 0.0 && d.y == 0.0) return 1;
    const double rel = wrap_angle(std::atan2(d.y, d.x) - sensor.direction);
    return rel <= sensor.width ? 1 : -1;
  }
  if (sensor.width >= kPi) return 1;
  const double len = norm(d);
  if (len == 0.0) return 1;
  return dot(d, sensor_axis(sensor)) >= std::cos(sensor.width) * len ? 1 : -1;
}

namespace {

struct SweepEvent {
  double distance;
  int axis;
  int index;
};

}  // namespace

VisibilityField sweep_visibility(const Environment& env, const Vec3& x, double range) {
  const Grid& g = env.grid();
  const int dim = g.dim;
  const double h = g.h;
  const auto& psi = env.psi().values;

  VisibilityField out;
  out.grid = g;
  out.position = x;
  out.range = range;
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      out.lower[a] = out.upper[a] = 0;
      continue;
    }
    const double lo = (x[a] - range - g.origin[a]) / h;
    const double hi = (x[a] + range - g.origin[a]) / h;
    out.lower[a] = std::clamp(static_cast<int>(std::floor(lo)), 0, g.nodes[a] - 1);
    out.upper[a] = std::clamp(static_cast<int>(std::ceil(hi)), 0, g.nodes[a] - 1);
  }
  const auto ext = out.extent();
  out.values.assign(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2], std::numeric_limits<double>::quiet_NaN());

  // Per-axis distance and direction (toward increasing index) from x.
  std::array<std::vector<double>, 3> dist;
  std::array<std::vector<int>, 3> side;
  for (int a = 0; a < 3; ++a) {
    dist[a].assign(static_cast<std::size_t>(g.nodes[a]), 0.0);
    side[a].assign(static_cast<std::size_t>(g.nodes[a]), 0);
    if (a >= dim) continue;
    for (int i = out.lower[a]; i <= out.upper[a]; ++i) {
      const double d = g.origin[a] + i * h - x[a];
      dist[a][static_cast<std::size_t>(i)] = std::abs(d);
      side[a][static_cast<std::size_t>(i)] = (d > 0.0) - (d < 0.0);
    }
  }

  std::vector<SweepEvent> events;
  for (int a = 0; a < dim; ++a) {
    for (int i = out.lower[a]; i <= out.upper[a]; ++i) events.push_back({dist[a][static_cast<std::size_t>(i)], a, i});
  }
  std::sort(events.begin(), events.end(), [](const SweepEvent& l, const SweepEvent& r) {
    if (l.distance != r.distance) return l.distance < r.distance;
    if (l.axis != r.axis) return l.axis < r.axis;
    return l.index < r.index;
  });

  const double psi_x = env.signed_distance(x);
  constexpr double kMinWeight = 1e-12;

  for (const auto& ev : events) {
    const int a = ev.axis;
    const double delta = ev.distance;
    // Restrict the other axes to indices whose distance can be <= delta.
    std::array<int, 3> lo = out.lower;
    std::array<int, 3> hi = out.upper;
    lo[a] = hi[a] = ev.index;
    for (int b = 0; b < dim; ++b) {
      if (b == a) continue;
      const double l = (x[b] - delta - g.origin[b]) / h;
      const double u = (x[b] + delta - g.origin[b]) / h;
      lo[b] = std::max(lo[b], static_cast<int>(std::floor(l)) - 1);
      hi[b] = std::min(hi[b], static_cast<int>(std::ceil(u)) + 1);
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const std::array<int, 3> c{i, j, k};
          // Each node belongs to its dominant axis; ties go to the lowest axis.
          bool owned = true;
          for (int b = 0; b < dim && owned; ++b) {
            if (b == a) continue;
            const double db = dist[b][static_cast<std::size_t>(c[b])];
            owned = b < a ? db < delta : db <= delta;
          }
          if (!owned) continue;

          const double psi_y = psi[g.index(i, j, k)];
          double v;
          if (delta < h) {
            v = std::min(psi_x, psi_y);
          } else {
            std::array<int, 3> base = c;
            base[a] -= side[a][static_cast<std::size_t>(c[a])];
            std::array<int, 2> others{};
            std::array<double, 2> frac{};
            std::array<int, 2> step{};
            int n_other = 0;
            for (int b = 0; b < dim; ++b) {
              if (b == a) continue;
              others[n_other] = b;
              frac[n_other] = dist[b][static_cast<std::size_t>(c[b])] / delta;
              step[n_other] = -side[b][static_cast<std::size_t>(c[b])];
              ++n_other;
            }
            double acc = 0.0;
            double wsum = 0.0;
            for (int mask = 0; mask < (1 << n_other); ++mask) {
              double w = 1.0;
              std::array<int, 3> q = base;
              for (int o = 0; o < n_other; ++o) {
                const bool toward = (mask >> o) & 1;
                w *= toward ? frac[o] : 1.0 - frac[o];
                if (toward) q[others[o]] += step[o];
              }
              if (w < kMinWeight) continue;
              acc += w * out.values[out.local(q[0], q[1], q[2])];
              wsum += w;
            }
            v = std::min(acc / wsum, psi_y);
          }
          out.values[out.local(i, j, k)] = v;
        }
      }
    }
  }
  return out;
}

ScalarField apply_sensor_cuts(const VisibilityField& vis, const Sensor& sensor) {
  const Grid& g = vis.grid;
  ScalarField phi(g, FieldRole::Coverage, -1.0);
  const Vec3& x = vis.position;
  const double r = sensor.range;
  for (int k = vis.lower[2]; k <= vis.upper[2]; ++k) {
    for (int j = vis.lower[1]; j <= vis.upper[1]; ++j) {
      for (int i = vis.lower[0]; i <= vis.upper[0]; ++i) {
        const Vec3 y = g.node(i, j, k);
        const double d = distance(x, y);
        if (d > r) continue;
        const double occl = vis.values[vis.local(i, j, k)];
        const double sector = sector_indicator(sensor, g.dim, x, y);
        phi.values[g.index(i, j, k)] = std::min({occl, r - d, sector});
      }
    }
  }
  return phi;
}

ScalarField compute_coverage(const Environment& env, const Sensor& sensor) {
  check_sensor(env, sensor);
  const Vec3 x = sensor_position(env, sensor);
  return apply_sensor_cuts(sweep_visibility(env, x, sensor.range), sensor);
}

ScalarField compute_coverage_3d(const Environment& env, const Sensor& sensor) {
  if (env.dim() != 3) throw ConfigError("compute_coverage_3d requires a 3D environment");
  return compute_coverage(env, sensor);
}

ScalarField union_coverage(std::span<const ScalarField> fields) {
  if (fields.empty()) throw GridMismatchError("union of an empty field list has no grid");
  ScalarField out = fields.front();
  out.role = FieldRole::Coverage;
  for (std::size_t f = 1; f < fields.size(); ++f) {
    if (!fields[f].grid.matches(out.grid)) throw GridMismatchError("coverage fields live on different grids");
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = std::max(out.values[n], fields[f].values[n]);
  }
  return out;
}

}  // namespace sensorplace
