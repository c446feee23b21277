#include "sensorplace/objective.hpp"

#include <algorithm>
#include <cmath>

#include "sensorplace/errors.hpp"

namespace sensorplace {

std::string_view to_string(ObjectiveMode mode) {
  return mode == ObjectiveMode::Expected ? "expected" : "deterministic";
}

void ObjectiveSpec::validate() const {
  if (!weight) return;
  for (double w : weight->values) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weight values must be finite and non-negative");
    if (band && w != 0.0 && w != 1.0) throw ConfigError("band weight values must be 0 or 1");
  }
}

void epsilon_values(const ScalarField& phi, std::vector<double>& out) { epsilon_values(phi.grid, phi.values, out); }

void epsilon_values(const Grid& g, std::span<const double> v, std::vector<double>& out) {
  out.assign(g.size(), 0.0);
  const double half_h = 0.5 * g.h;
  const double inv_h = 1.0 / g.h;
  const std::array<std::size_t, 3> stride{1, static_cast<std::size_t>(g.nodes[0]),
                                          static_cast<std::size_t>(g.nodes[0]) * g.nodes[1]};
  std::size_t idx = 0;
  for (int k = 0; k < g.nodes[2]; ++k) {
    for (int j = 0; j < g.nodes[1]; ++j) {
      for (int i = 0; i < g.nodes[0]; ++i, ++idx) {
        const std::array<int, 3> c{i, j, k};
        double l1 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          const int n = g.nodes[a];
          if (n < 2) continue;
          const std::size_t s = stride[a];
          double d;
          if (c[a] == 0) {
            d = (v[idx + s] - v[idx]) * inv_h;
          } else if (c[a] == n - 1) {
            d = (v[idx] - v[idx - s]) * inv_h;
          } else {
            d = (v[idx + s] - v[idx - s]) * (0.5 * inv_h);
          }
          l1 += std::abs(d);
        }
        out[idx] = half_h * l1;
      }
    }
  }
}

ScalarField epsilon_field(const ScalarField& phi) {
  ScalarField eps(phi.grid, FieldRole::Other);
  epsilon_values(phi, eps.values);
  return eps;
}

std::vector<double> smoothed_membership(const ScalarField& phi) {
  std::vector<double> eps;
  epsilon_values(phi, eps);
  std::vector<double> m(phi.values.size());
  for (std::size_t n = 0; n < m.size(); ++n) m[n] = heaviside_reg(phi.values[n], eps[n]);
  return m;
}

std::vector<double> objective_weights(const Environment& env, const ObjectiveSpec& spec) {
  const Grid& g = env.grid();
  std::vector<double> w = trapezoid_weights(g);
  std::optional<ScalarField> weight;
  if (spec.weight) weight = resample_nearest(*spec.weight, g);
  const auto& psi = env.psi().values;
  for (std::size_t n = 0; n < w.size(); ++n) {
    if (psi[n] < 0.0) {
      w[n] = 0.0;
    } else if (weight) {
      w[n] *= weight->values[n];
    }
  }
  return w;
}

double weighted_free_measure(const Environment& env, const ObjectiveSpec& spec) {
  const auto w = objective_weights(env, spec);
  double acc = 0.0;
  for (double x : w) acc += x;
  return acc;
}

namespace {

void require_grid(const Environment& env, const ScalarField& f) {
  if (!f.grid.matches(env.grid())) throw GridMismatchError("field grid does not match the environment grid");
}

}  // namespace

ObjectiveValue coverage_area(const Environment& env, const ScalarField& union_phi, const ObjectiveSpec& spec) {
  require_grid(env, union_phi);
  const auto w = objective_weights(env, spec);
  std::vector<double> eps;
  epsilon_values(union_phi, eps);
  ObjectiveValue out;
  out.mode = ObjectiveMode::Deterministic;
  out.coverage_degree = ScalarField(union_phi.grid, FieldRole::Other);
  for (std::size_t n = 0; n < w.size(); ++n) {
    const double hv = heaviside_reg(union_phi.values[n], eps[n]);
    out.coverage_degree.values[n] = hv;
    out.value += w[n] * hv;
    if (union_phi.values[n] > 0.0) out.hard_value += w[n];
  }
  return out;
}

ObjectiveValue expected_coverage(const Environment& env, std::span<const ScalarField> fields,
                                 std::span<const Sensor> sensors, const ObjectiveSpec& spec) {
  if (fields.size() != sensors.size()) throw ConfigError("expected coverage needs one field per sensor");
  for (const auto& f : fields) require_grid(env, f);
  for (const auto& s : sensors) {
    if (!(s.failure >= 0.0 && s.failure < 1.0)) throw ConfigError("failure probability must lie in [0, 1)");
  }
  const auto w = objective_weights(env, spec);
  const std::size_t n_nodes = w.size();
  std::vector<double> soft(n_nodes, 1.0);
  std::vector<double> hard(n_nodes, 1.0);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto m = smoothed_membership(fields[k]);
    const double works = 1.0 - sensors[k].failure;
    for (std::size_t n = 0; n < n_nodes; ++n) {
      soft[n] *= 1.0 - m[n] * works;
      if (fields[k].values[n] > 0.0) hard[n] *= sensors[k].failure;
    }
  }
  ObjectiveValue out;
  out.mode = ObjectiveMode::Expected;
  out.coverage_degree = ScalarField(env.grid(), FieldRole::Other);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    const double detect = 1.0 - soft[n];
    out.coverage_degree.values[n] = detect;
    out.value += w[n] * detect;
    out.hard_value += w[n] * (1.0 - hard[n]);
  }
  if (!fields.empty()) out.overlap = overlap_count(fields);
  return out;
}

CountField overlap_count(std::span<const ScalarField> fields) {
  if (fields.empty()) throw GridMismatchError("overlap of an empty field list has no grid");
  CountField out{fields.front().grid, std::vector<int>(fields.front().values.size(), 0)};
  for (const auto& f : fields) {
    if (!f.grid.matches(out.grid)) throw GridMismatchError("coverage fields live on different grids");
    for (std::size_t n = 0; n < f.values.size(); ++n) out.values[n] += f.values[n] > 0.0 ? 1 : 0;
  }
  return out;
}

ScalarField blind_spot_weight(const Environment& env, const Sensor& anchor, std::optional<Box> box) {
  const ScalarField phi = compute_coverage(env, anchor);
  const Grid& g = env.grid();
  ScalarField w(g, FieldRole::Weight, 0.0);
  const auto& psi = env.psi().values;
  for (std::size_t n = 0; n < w.values.size(); ++n) {
    if (psi[n] > 0.0 && !(phi.values[n] > 0.0)) w.values[n] = 1.0;
    if (box) {
      const Vec3 p = g.node(n);
      bool inside = true;
      for (int a = 0; a < g.dim; ++a) inside = inside && p[a] >= box->lower[a] && p[a] <= box->upper[a];
      if (inside) w.values[n] = 1.0;
    }
  }
  return w;
}

ScalarField band_weight(const Environment& env, const Polygon& outer, const Polygon& inner) {
  if (env.dim() != 2) throw ConfigError("polygon bands require a 2D environment");
  const Grid& g = env.grid();
  ScalarField w(g, FieldRole::Weight, 0.0);
  for (std::size_t n = 0; n < w.values.size(); ++n) {
    const Vec3 p = g.node(n);
    const bool in_outer = outer.contains(p) || outer.boundary_distance(p) == 0.0;
    if (in_outer && !inner.contains(p)) w.values[n] = 1.0;
  }
  return w;
}

ScalarField band_weight(const Environment& env, int obstacle, double width) {
  env.validate_boundary(BoundaryId{BoundaryKind::Obstacle, obstacle, 0});
  if (!(width > 0.0)) throw ConfigError("band width must be positive");
  const Grid& g = env.grid();
  ScalarField w(g, FieldRole::Weight, 0.0);
  const auto idx = static_cast<std::size_t>(obstacle);
  for (std::size_t n = 0; n < w.values.size(); ++n) {
    const Vec3 p = g.node(n);
    double d;
    if (env.dim() == 2) {
      const auto& poly = env.polygons()[idx];
      d = poly.contains(p) ? -1.0 : poly.boundary_distance(p);
    } else {
      d = env.boxes()[idx].signed_distance(p);
    }
    if (d >= 0.0 && d <= width && !env.inside_obstacle(p)) w.values[n] = 1.0;
  }
  return w;
}

}  // namespace sensorplace
