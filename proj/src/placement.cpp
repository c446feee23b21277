#include "sensorplace/placement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

Placement Placement::identity(const Environment& env, std::vector<Sensor> sensors) {
  Placement p;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    auto& s = sensors[i];
    check_sensor(env, s);
    const int id = static_cast<int>(i);
    if (s.kind == LocationKind::Boundary) s.boundary = env.normalize(s.boundary);
    if (s.kind == LocationKind::Fixed) s.location_adjustable = false;
    if (s.direction_adjustable) {
      s.direction = wrap_angle(s.direction);
      p.params_.push_back({ParamKind::Direction, id, 0.0, kTwoPi, true});
      p.initial_.push_back(s.direction);
      if (env.dim() == 3) {
        s.polar = std::clamp(s.polar, kPolarClamp, kPi - kPolarClamp);
        p.params_.push_back({ParamKind::Polar, id, kPolarClamp, kPi - kPolarClamp, false});
        p.initial_.push_back(s.polar);
      }
    }
    if (s.location_adjustable) {
      if (env.dim() == 2) {
        p.params_.push_back({ParamKind::Arc, id, 0.0, env.boundary_length(s.boundary.id), true});
        p.initial_.push_back(s.boundary.s);
      } else {
        const auto [ls, lt] = env.face_extent(s.boundary.id);
        p.params_.push_back({ParamKind::FaceS, id, 0.0, ls, false});
        p.initial_.push_back(s.boundary.s);
        p.params_.push_back({ParamKind::FaceT, id, 0.0, lt, false});
        p.initial_.push_back(s.boundary.t);
      }
    }
  }
  for (const auto& info : p.params_) p.affected_.push_back({info.sensor});
  p.base_ = std::move(sensors);
  return p;
}

Placement Placement::symmetric(const Environment& env, const SymmetryTemplate& tmpl) {
  if (env.dim() != 2) throw ConfigError("symmetry constraints require a 2D polygon obstacle");
  env.validate_boundary(BoundaryId{BoundaryKind::Obstacle, tmpl.obstacle, 0});
  const auto& poly = env.polygons()[static_cast<std::size_t>(tmpl.obstacle)];
  Placement p;
  p.symmetry_ = tmpl;
  double start = 0.0;
  double min_len = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const Vec3 d = v[(e + 1) % v.size()] - v[e];
    const double len = norm(d);
    p.edges_.push_back({start, len, wrap_angle(std::atan2(-d.x, d.y))});
    start += len;
    min_len = std::min(min_len, len);
  }
  const double half = 0.5 * min_len;
  if (tmpl.offset < 0.0 || tmpl.offset > half) {
    throw ConfigError("symmetric offset " + std::to_string(tmpl.offset) + " exceeds half the shortest edge (" +
                      std::to_string(half) + ")");
  }
  p.params_.push_back({ParamKind::Offset, -1, 0.0, half, false});
  p.params_.push_back({ParamKind::MirrorAngle, -1, 0.0, kTwoPi, true});
  p.initial_ = {tmpl.offset, wrap_angle(tmpl.mirror_angle)};
  p.base_ = p.expand(p.initial_);
  for (const auto& s : p.base_) check_sensor(env, s);
  std::vector<int> all(p.base_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  p.affected_ = {all, all};
  return p;
}

void Placement::normalize(std::span<double> params) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& info = params_[i];
    if (info.periodic) {
      params[i] = info.lower + wrap_periodic(params[i] - info.lower, info.upper - info.lower);
    } else {
      params[i] = std::clamp(params[i], info.lower, info.upper);
    }
  }
}

std::vector<Sensor> Placement::expand(std::span<const double> params) const {
  if (params.size() != params_.size()) throw ConfigError("parameter vector has the wrong length");
  if (symmetry_) {
    const auto& t = *symmetry_;
    const double offset = params[0];
    const double half = params_.empty() ? 0.0 : params_[0].upper;
    if (offset < -1e-12 || (!params_.empty() && offset > half + 1e-12)) {
      throw ConfigError("symmetric offset exceeds half the edge length");
    }
    const double turn = params[1];
    std::vector<Sensor> out;
    out.reserve(3 * edges_.size());
    for (const auto& e : edges_) {
      const double mid = e.start + 0.5 * e.length;
      const BoundaryId id{BoundaryKind::Obstacle, t.obstacle, 0};
      // Start angles of the sectors whose centre lines are rotated by -turn, 0, +turn.
      Sensor left = Sensor::on_boundary({id, mid - offset}, t.range, wrap_angle(e.normal + turn - 0.5 * t.width),
                                        t.width, t.failure, true);
      Sensor centre =
          Sensor::on_boundary({id, mid}, t.range, wrap_angle(e.normal - 0.5 * t.width), t.width, t.failure, false);
      centre.direction_adjustable = false;
      Sensor right = Sensor::on_boundary({id, mid + offset}, t.range, wrap_angle(e.normal - turn - 0.5 * t.width),
                                         t.width, t.failure, true);
      out.push_back(left);
      out.push_back(centre);
      out.push_back(right);
    }
    return out;
  }
  std::vector<Sensor> out = base_;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& s = out[static_cast<std::size_t>(params_[i].sensor)];
    switch (params_[i].kind) {
      case ParamKind::Direction:
        s.direction = params[i];
        break;
      case ParamKind::Polar:
        s.polar = params[i];
        break;
      case ParamKind::Arc:
      case ParamKind::FaceS:
        s.boundary.s = params[i];
        break;
      case ParamKind::FaceT:
        s.boundary.t = params[i];
        break;
      case ParamKind::Offset:
      case ParamKind::MirrorAngle:
        break;
    }
  }
  return out;
}

}  // namespace sensorplace
