#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/visibility.hpp"

namespace sensorplace {

/// Kind of one free coordinate of a placement.
enum class ParamKind : std::uint8_t {
  Direction,  ///< viewing angle (2D start angle or 3D azimuth), periodic
  Polar,      ///< 3D polar angle, clamped away from the poles
  Arc,        ///< 2D arc length along a closed boundary, periodic
  FaceS,      ///< 3D face coordinate along the first tangent, clamped
  FaceT,      ///< 3D face coordinate along the second tangent, clamped
  Offset,     ///< symmetric offset from an edge midpoint, clamped
  MirrorAngle ///< symmetric rotation about the edge normal, periodic
};

struct ParamInfo {
  ParamKind kind = ParamKind::Direction;
  int sensor = -1;  ///< owning sensor for identity maps, -1 for shared coordinates
  double lower = 0.0;
  double upper = 0.0;
  bool periodic = false;

  bool angular() const {
    return kind == ParamKind::Direction || kind == ParamKind::Polar || kind == ParamKind::MirrorAngle;
  }
};

/// Three sensors per polygon edge: one fixed at the midpoint looking along
/// the outward normal, and a mirrored pair at midpoint -/+ offset whose
/// viewing directions are rotated by +/- mirror angle about the normal.
struct SymmetryTemplate {
  int obstacle = 0;
  double range = 0.5;
  double width = kPi / 2.0;
  double failure = 0.0;
  double offset = 0.0;
  double mirror_angle = 0.0;
};

/// Decision variable of the optimiser: a sensor roster plus the map from a
/// flat parameter vector to that roster.
class Placement {
 public:
  /// Every adjustable direction and every movable boundary location becomes a coordinate.
  static Placement identity(const Environment& env, std::vector<Sensor> sensors);
  /// Two coordinates (offset, mirror angle) drive all 3 * edges sensors.
  static Placement symmetric(const Environment& env, const SymmetryTemplate& tmpl);

  std::span<const ParamInfo> params() const { return params_; }
  std::size_t dimension() const { return params_.size(); }
  std::size_t sensor_count() const { return base_.size(); }
  const std::vector<double>& initial() const { return initial_; }
  bool symmetric() const { return symmetry_.has_value(); }
  const std::optional<SymmetryTemplate>& symmetry() const { return symmetry_; }

  std::vector<Sensor> expand(std::span<const double> params) const;
  /// Wraps periodic and clamps bounded coordinates in place.
  void normalize(std::span<double> params) const;
  /// Indices of the sensors that coordinate `param` moves.
  std::span<const int> affected(std::size_t param) const { return affected_[param]; }

 private:
  struct EdgeFrame {
    double start = 0.0;   ///< arc coordinate of the edge's first vertex
    double length = 0.0;
    double normal = 0.0;  ///< outward normal angle
  };

  std::vector<Sensor> base_;
  std::vector<ParamInfo> params_;
  std::vector<std::vector<int>> affected_;
  std::vector<double> initial_;
  std::optional<SymmetryTemplate> symmetry_;
  std::vector<EdgeFrame> edges_;
};

}  // namespace sensorplace
