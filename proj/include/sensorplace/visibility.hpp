#pragma once

#include <array>
#include <span>
#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/geometry.hpp"
#include "sensorplace/grid.hpp"

namespace sensorplace {

enum class LocationKind : std::uint8_t { Fixed, Boundary };

/// A limited-range, limited-angle sensor.
///
/// Planar sensors see the angular sector [direction, direction + width]
/// (angles from the +x axis, counterclockwise). Spatial sensors see a cone
/// of half-angle `width` around the axis given by (direction = azimuth,
/// polar).
struct Sensor {
  LocationKind kind = LocationKind::Fixed;
  Vec3 point;               ///< used when kind == Fixed
  BoundaryParam boundary;   ///< used when kind == Boundary
  double range = 0.5;
  double direction = 0.0;
  double polar = kPi / 2.0;
  double width = kPi / 2.0;
  double failure = 0.0;     ///< probability in [0, 1)
  bool direction_adjustable = true;
  bool location_adjustable = false;

  static Sensor fixed(Vec3 point, double range, double direction, double width, double failure = 0.0);
  static Sensor on_boundary(BoundaryParam bp, double range, double direction, double width, double failure = 0.0,
                            bool movable = true);

  friend bool operator==(const Sensor&, const Sensor&) = default;
};

inline constexpr double kPolarClamp = 1e-6;

/// Point at which the sensor's coverage is evaluated.
Vec3 sensor_position(const Environment& env, const Sensor& sensor);
Vec3 sensor_axis(const Sensor& sensor);

/// Throws InfeasibleError when the sensor lies outside the domain or inside
/// (or on) an obstacle, ConfigError on invalid range/width/failure values.
void check_sensor(const Environment& env, const Sensor& sensor);
bool is_feasible(const Environment& env, const Sensor& sensor);

/// +1 when y lies in the sensor's angular sector (or cone) seen from x, -1 otherwise.
int sector_indicator(const Sensor& sensor, int dim, const Vec3& x, const Vec3& y);

/// Occlusion memory of one vantage point: the running minimum of psi along
/// every ray from the sensor, sampled on the grid nodes of the sensor's
/// bounding box.
struct VisibilityField {
  Grid grid;
  Vec3 position;
  double range = 0.0;
  std::array<int, 3> lower{0, 0, 0};  ///< inclusive node bounds of the box
  std::array<int, 3> upper{0, 0, 0};
  std::vector<double> values;

  std::array<int, 3> extent() const {
    return {upper[0] - lower[0] + 1, upper[1] - lower[1] + 1, upper[2] - lower[2] + 1};
  }
  std::size_t local(int i, int j, int k) const {
    const auto e = extent();
    return static_cast<std::size_t>(i - lower[0]) +
           static_cast<std::size_t>(e[0]) *
               (static_cast<std::size_t>(j - lower[1]) + static_cast<std::size_t>(e[1]) * static_cast<std::size_t>(k - lower[2]));
  }
};

/// Upwind characteristics sweep from x over the box around B_r(x).
///
/// Nodes are visited in increasing Chebyshev distance from x. Each node
/// steps one cell back toward x along its dominant axis and interpolates
/// (linearly in 2D, bilinearly in 3D) the already-finalised occlusion
/// values where the ray crosses that grid line or plane.
VisibilityField sweep_visibility(const Environment& env, const Vec3& x, double range);

/// Applies the range ball and the angular cut to an occlusion field.
ScalarField apply_sensor_cuts(const VisibilityField& vis, const Sensor& sensor);

/// Coverage level set of one sensor: positive exactly on covered nodes,
/// -1 outside the sensing ball.
ScalarField compute_coverage(const Environment& env, const Sensor& sensor);
/// Spatial variant; same contract, requires a 3D environment.
ScalarField compute_coverage_3d(const Environment& env, const Sensor& sensor);

/// Pointwise maximum of coverage fields sharing one grid.
ScalarField union_coverage(std::span<const ScalarField> fields);

}  // namespace sensorplace
