#pragma once

#include <cstddef>
#include <span>

#include "sensorplace/environment.hpp"
#include "sensorplace/grid.hpp"
#include "sensorplace/visibility.hpp"

namespace sensorplace {

/// Brute-force reference for the level-set pipeline. Uses only the obstacle
/// geometry; never touches psi, sweeps or H_eps.

/// True iff the closed segment x-y misses the open interior of every
/// obstacle. Touching a boundary (grazing a vertex, sliding along an edge or
/// face) counts as visible.
bool ray_visible(const Environment& env, const Vec3& x, const Vec3& y);

/// Covered by the definition: within range, inside the sector and visible.
bool oracle_covered(const Environment& env, const Sensor& sensor, const Vec3& y);

struct OracleReport {
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t excluded = 0;    ///< free nodes inside the 2h band around coverage boundaries
  std::size_t free_nodes = 0;  ///< agree + disagree + excluded
  CountField mask;             ///< 1 = disagreement, 2 = excluded, 0 otherwise
  double area = 0.0;           ///< trapezoidal oracle area, excluded nodes counted half
  double area_half_width = 0.0;

  double agreement() const {
    const std::size_t judged = agree + disagree;
    return judged == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(judged);
  }
};

/// Compares sign(phi) > 0 with the oracle on every free grid node. Nodes
/// within 2h of the range circle/sphere, the sector edges, an obstacle
/// boundary, a shadow boundary or the sensor itself are excluded.
OracleReport oracle_coverage_check(const Environment& env, const Sensor& sensor, const ScalarField& phi);

/// Hard-count union coverage area on the grid refined m times, trapezoid weights.
double oracle_area(const Environment& env, std::span<const Sensor> sensors, int refinement);

}  // namespace sensorplace
