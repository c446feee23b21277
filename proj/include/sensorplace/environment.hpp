#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sensorplace/geometry.hpp"
#include "sensorplace/grid.hpp"

namespace sensorplace {

/// Axis-aligned computational box with uniform spacing h.
struct Domain {
  int dim = 2;
  Vec3 lower;
  Vec3 upper{1.0, 1.0, 0.0};
  double h = 0.01;

  /// Throws ConfigError when the box is empty, h is not positive or a side
  /// is not an integer multiple of h.
  void validate() const;
  Grid grid() const;
  double diagonal() const;
  bool contains(const Vec3& p, double tol = 1e-12) const;
};

/// Simple planar polygon, counterclockwise.
struct Polygon {
  std::vector<Vec3> vertices;

  double signed_area() const;
  double perimeter() const;
  /// Strict interior test (points on an edge are outside).
  bool contains(const Vec3& p) const;
  double boundary_distance(const Vec3& p) const;
};

/// Axis-aligned box obstacle (3D scenes).
struct Box {
  Vec3 lower;
  Vec3 upper;

  bool contains(const Vec3& p) const;  // strict interior
  double signed_distance(const Vec3& p) const;
};

enum class BoundaryKind : std::uint8_t { Domain, Obstacle };

/// Identifies a boundary that sensors slide along.
///
/// 2D: the domain walls form one closed counterclockwise loop starting at
/// the lower-left corner (wall 0 bottom, 1 right, 2 top, 3 left); each
/// polygon obstacle is a closed loop starting at its vertex 0.
/// 3D: `face` selects one face of the domain or of a box obstacle,
/// numbered -x, +x, -y, +y, -z, +z.
struct BoundaryId {
  BoundaryKind kind = BoundaryKind::Domain;
  int obstacle = 0;
  int face = 0;

  friend bool operator==(const BoundaryId&, const BoundaryId&) = default;
};

/// Position on a boundary: arc length s (2D) or face coordinates (s, t) (3D).
struct BoundaryParam {
  BoundaryId id;
  double s = 0.0;
  double t = 0.0;

  friend bool operator==(const BoundaryParam&, const BoundaryParam&) = default;
};

struct BoundaryPoint {
  Vec3 point;
  Vec3 normal;  ///< Unit normal pointing into free space.
};

/// Monitored region plus obstacles, with the signed-distance field psi
/// sampled on the domain grid (negative inside obstacles, capped at the
/// domain diagonal).
class Environment {
 public:
  Environment(Domain domain, std::vector<Polygon> polygons);
  Environment(Domain domain, std::vector<Box> boxes);

  int dim() const { return domain_.dim; }
  const Domain& domain() const { return domain_; }
  const Grid& grid() const { return psi_.grid; }
  const ScalarField& psi() const { return psi_; }
  double cap() const { return cap_; }
  std::span<const Polygon> polygons() const { return polygons_; }
  std::span<const Box> boxes() const { return boxes_; }
  std::size_t obstacle_count() const { return dim() == 2 ? polygons_.size() : boxes_.size(); }

  /// Exact signed distance to the obstacle boundary at an arbitrary point.
  double signed_distance(const Vec3& p) const;
  bool inside_obstacle(const Vec3& p) const;

  /// Perimeter (2D loops) of a boundary; for 3D faces, the first side length.
  double boundary_length(const BoundaryId& id) const;
  /// Side lengths (s extent, t extent) of a 3D face.
  std::pair<double, double> face_extent(const BoundaryId& id) const;

  BoundaryPoint boundary_point(const BoundaryParam& bp) const;
  BoundaryParam move_along_boundary(const BoundaryParam& bp, double ds, double dt = 0.0) const;
  /// Wraps (2D loops) or clamps (3D faces) a parameter into its valid range.
  BoundaryParam normalize(BoundaryParam bp) const;

  /// Evaluation point of a boundary sensor: the boundary point pushed into
  /// free space by the standoff distance h/2. At a polygon vertex the push
  /// follows the bisector of the adjacent edge normals.
  Vec3 standoff_point(const BoundaryParam& bp) const;
  double standoff() const { return 0.5 * domain_.h; }

  /// Loop coordinate of the start of a 2D domain wall (0..3).
  double wall_offset(int wall) const;
  double wall_length(int wall) const;
  int wall_of(double s) const;

  void validate_boundary(const BoundaryId& id) const;

 private:
  void build_psi();
  BoundaryPoint polygon_point(const Polygon& poly, bool outward_is_right, double s, bool* at_vertex,
                              Vec3* bisector) const;
  std::vector<Vec3> domain_loop() const;

  Domain domain_;
  std::vector<Polygon> polygons_;
  std::vector<Box> boxes_;
  double cap_ = 0.0;
  ScalarField psi_;
};

}  // namespace sensorplace
