#include "sensorplace/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

namespace {

constexpr double kRelativeTol = 1e-9;

double cross2(const Vec3& a, const Vec3& b) { return a.x * b.y - a.y * b.x; }

// Proper or touching intersection of closed segments [p1,p2] and [q1,q2].
bool segments_intersect(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
  auto orient = [](const Vec3& a, const Vec3& b, const Vec3& c) {
    const double v = cross2(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](const Vec3& a, const Vec3& b, const Vec3& c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

void validate_polygon(Polygon& poly, std::size_t index, const Domain& domain) {
  const std::string tag = "polygon " + std::to_string(index);
  auto& v = poly.vertices;
  if (v.size() < 3) throw ConfigError(tag + ": needs at least 3 vertices");
  for (auto& p : v) p.z = 0.0;
  const double area = poly.signed_area();
  if (std::abs(area) <= 0.0) throw ConfigError(tag + ": zero area");
  if (area < 0.0) std::reverse(v.begin(), v.end());
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(v[i], v[(i + 1) % n]) <= 0.0) throw ConfigError(tag + ": repeated vertex");
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        throw ConfigError(tag + ": edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }
  const double tol = kRelativeTol * domain.diagonal();
  for (const auto& p : v) {
    if (!domain.contains(p, tol)) throw ConfigError(tag + ": vertex outside the domain");
  }
}

BoundaryPoint face_point(const Vec3& lower, const Vec3& upper, int face, double s, double t, bool outward) {
  const int a = face / 2;
  const bool max_side = face % 2 == 1;
  const int b = a == 0 ? 1 : 0;
  const int c = a == 2 ? 1 : 2;
  BoundaryPoint out;
  out.point[a] = max_side ? upper[a] : lower[a];
  out.point[b] = lower[b] + s;
  out.point[c] = lower[c] + t;
  // Obstacle faces face away from the box; domain faces face into it.
  const double sign = (max_side == outward) ? 1.0 : -1.0;
  out.normal[a] = sign;
  return out;
}

std::pair<double, double> extent_of(const Vec3& lower, const Vec3& upper, int face) {
  const int a = face / 2;
  const int b = a == 0 ? 1 : 0;
  const int c = a == 2 ? 1 : 2;
  return {upper[b] - lower[b], upper[c] - lower[c]};
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

void Domain::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid spacing h must be positive");
  for (int a = 0; a < dim; ++a) {
    const double side = upper[a] - lower[a];
    if (!(side > 0.0)) throw ConfigError("empty domain: upper corner must exceed lower corner");
    const double cells = side / h;
    if (std::abs(cells - std::round(cells)) > kRelativeTol * std::max(1.0, cells)) {
      throw ConfigError("domain side " + std::to_string(side) + " is not a multiple of h=" + std::to_string(h));
    }
  }
}

Grid Domain::grid() const {
  Grid g;
  g.dim = dim;
  g.origin = lower;
  if (dim == 2) g.origin.z = 0.0;
  g.h = h;
  for (int a = 0; a < dim; ++a) g.nodes[a] = static_cast<int>(std::lround((upper[a] - lower[a]) / h)) + 1;
  return g;
}

double Domain::diagonal() const {
  Vec3 d = upper - lower;
  if (dim == 2) d.z = 0.0;
  return norm(d);
}

bool Domain::contains(const Vec3& p, double tol) const {
  for (int a = 0; a < dim; ++a) {
    if (p[a] < lower[a] - tol || p[a] > upper[a] + tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Polygon / Box

double Polygon::signed_area() const {
  double acc = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) acc += cross2(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * acc;
}

double Polygon::perimeter() const {
  double acc = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) acc += distance(vertices[i], vertices[(i + 1) % n]);
  return acc;
}

double Polygon::boundary_distance(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, vertices[i], vertices[(i + 1) % n]));
  }
  return best;
}

bool Polygon::contains(const Vec3& p) const {
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec3& a = vertices[i];
    const Vec3& b = vertices[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xcross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xcross) inside = !inside;
    }
  }
  return inside && boundary_distance(p) > 0.0;
}

bool Box::contains(const Vec3& p) const {
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] > lower[a] && p[a] < upper[a])) return false;
  }
  return true;
}

double Box::signed_distance(const Vec3& p) const {
  Vec3 outside;
  double depth = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (int a = 0; a < 3; ++a) {
    const double below = lower[a] - p[a];
    const double above = p[a] - upper[a];
    outside[a] = std::max({below, above, 0.0});
    if (below >= 0.0 || above >= 0.0) inside = false;
    depth = std::min(depth, std::min(-below, -above));
  }
  return inside ? -depth : norm(outside);
}

// ---------------------------------------------------------------------------
// Environment

Environment::Environment(Domain domain, std::vector<Polygon> polygons)
    : domain_(domain), polygons_(std::move(polygons)) {
  domain_.validate();
  if (domain_.dim != 2) throw ConfigError("polygon obstacles require a 2D domain");
  domain_.lower.z = domain_.upper.z = 0.0;
  for (std::size_t i = 0; i < polygons_.size(); ++i) validate_polygon(polygons_[i], i, domain_);
  build_psi();
}

Environment::Environment(Domain domain, std::vector<Box> boxes) : domain_(domain), boxes_(std::move(boxes)) {
  domain_.validate();
  if (domain_.dim != 3) throw ConfigError("box obstacles require a 3D domain");
  const double tol = kRelativeTol * domain_.diagonal();
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    const auto& b = boxes_[i];
    for (int a = 0; a < 3; ++a) {
      if (!(b.upper[a] > b.lower[a])) throw ConfigError("box " + std::to_string(i) + ": empty extent");
    }
    if (!domain_.contains(b.lower, tol) || !domain_.contains(b.upper, tol)) {
      throw ConfigError("box " + std::to_string(i) + ": outside the domain");
    }
  }
  build_psi();
}

void Environment::build_psi() {
  cap_ = domain_.diagonal();
  psi_ = ScalarField(domain_.grid(), FieldRole::Environment, cap_);
  for (std::size_t n = 0; n < psi_.values.size(); ++n) psi_.values[n] = signed_distance(psi_.grid.node(n));
}

double Environment::signed_distance(const Vec3& p) const {
  double d = cap_;
  if (dim() == 2) {
    bool inside = false;
    for (const auto& poly : polygons_) {
      d = std::min(d, poly.boundary_distance(p));
      if (!inside && poly.contains(p)) inside = true;
    }
    if (inside) d = -d;
  } else {
    double outside = cap_;
    double inside = 0.0;
    for (const auto& box : boxes_) {
      const double sd = box.signed_distance(p);
      if (sd < 0.0) {
        inside = std::min(inside, sd);
      } else {
        outside = std::min(outside, sd);
      }
    }
    d = inside < 0.0 ? inside : outside;
  }
  return std::clamp(d, -cap_, cap_);
}

bool Environment::inside_obstacle(const Vec3& p) const {
  if (dim() == 2) {
    return std::any_of(polygons_.begin(), polygons_.end(), [&](const Polygon& poly) { return poly.contains(p); });
  }
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(p); });
}

std::vector<Vec3> Environment::domain_loop() const {
  const Vec3& lo = domain_.lower;
  const Vec3& hi = domain_.upper;
  return {{lo.x, lo.y, 0.0}, {hi.x, lo.y, 0.0}, {hi.x, hi.y, 0.0}, {lo.x, hi.y, 0.0}};
}

void Environment::validate_boundary(const BoundaryId& id) const {
  if (id.kind == BoundaryKind::Obstacle) {
    if (id.obstacle < 0 || static_cast<std::size_t>(id.obstacle) >= obstacle_count()) {
      throw ConfigError("invalid boundary id: obstacle " + std::to_string(id.obstacle) + " does not exist");
    }
  }
  if (dim() == 3 && (id.face < 0 || id.face > 5)) {
    throw ConfigError("invalid boundary id: face " + std::to_string(id.face) + " (expected 0..5)");
  }
}

double Environment::boundary_length(const BoundaryId& id) const {
  validate_boundary(id);
  if (dim() == 3) return face_extent(id).first;
  if (id.kind == BoundaryKind::Domain) {
    return 2.0 * ((domain_.upper.x - domain_.lower.x) + (domain_.upper.y - domain_.lower.y));
  }
  return polygons_[static_cast<std::size_t>(id.obstacle)].perimeter();
}

std::pair<double, double> Environment::face_extent(const BoundaryId& id) const {
  validate_boundary(id);
  if (dim() != 3) throw ConfigError("face extents exist only in 3D");
  if (id.kind == BoundaryKind::Domain) return extent_of(domain_.lower, domain_.upper, id.face);
  const auto& b = boxes_[static_cast<std::size_t>(id.obstacle)];
  return extent_of(b.lower, b.upper, id.face);
}

BoundaryPoint Environment::polygon_point(const Polygon& poly, bool outward_is_right, double s, bool* at_vertex,
                                         Vec3* bisector) const {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  const double total = poly.perimeter();
  s = wrap_periodic(s, total);
  auto edge_normal = [&](std::size_t e) {
    const Vec3 d = normalized(v[(e + 1) % n] - v[e]);
    return outward_is_right ? Vec3{d.y, -d.x, 0.0} : Vec3{-d.y, d.x, 0.0};
  };
  const double tol = 1e-12 * std::max(1.0, total);
  double start = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const double len = distance(v[e], v[(e + 1) % n]);
    const double end = start + len;
    if (s < end || e == n - 1) {
      const double local = std::clamp(s - start, 0.0, len);
      BoundaryPoint out{v[e] + (v[(e + 1) % n] - v[e]) * (local / len), edge_normal(e)};
      if (at_vertex != nullptr) {
        *at_vertex = false;
        if (local <= tol) {
          *at_vertex = true;
          *bisector = normalized(edge_normal((e + n - 1) % n) + out.normal);
        } else if (len - local <= tol) {
          *at_vertex = true;
          *bisector = normalized(out.normal + edge_normal((e + 1) % n));
        }
      }
      return out;
    }
    start = end;
  }
  return {v[0], edge_normal(0)};
}

BoundaryPoint Environment::boundary_point(const BoundaryParam& bp) const {
  validate_boundary(bp.id);
  if (!std::isfinite(bp.s) || !std::isfinite(bp.t)) throw ConfigError("boundary coordinate is not finite");
  if (dim() == 2) {
    if (bp.id.kind == BoundaryKind::Domain) {
      return polygon_point(Polygon{domain_loop()}, false, bp.s, nullptr, nullptr);
    }
    return polygon_point(polygons_[static_cast<std::size_t>(bp.id.obstacle)], true, bp.s, nullptr, nullptr);
  }
  const BoundaryParam p = normalize(bp);
  if (p.id.kind == BoundaryKind::Domain) return face_point(domain_.lower, domain_.upper, p.id.face, p.s, p.t, false);
  const auto& b = boxes_[static_cast<std::size_t>(p.id.obstacle)];
  return face_point(b.lower, b.upper, p.id.face, p.s, p.t, true);
}

BoundaryParam Environment::normalize(BoundaryParam bp) const {
  if (dim() == 2) {
    bp.s = wrap_periodic(bp.s, boundary_length(bp.id));
    bp.t = 0.0;
  } else {
    const auto [ls, lt] = face_extent(bp.id);
    bp.s = std::clamp(bp.s, 0.0, ls);
    bp.t = std::clamp(bp.t, 0.0, lt);
  }
  return bp;
}

BoundaryParam Environment::move_along_boundary(const BoundaryParam& bp, double ds, double dt) const {
  BoundaryParam out = bp;
  out.s += ds;
  out.t += dt;
  return normalize(out);
}

Vec3 Environment::standoff_point(const BoundaryParam& bp) const {
  if (dim() == 3) {
    const auto b = boundary_point(bp);
    return b.point + b.normal * standoff();
  }
  validate_boundary(bp.id);
  bool at_vertex = false;
  Vec3 bisector;
  BoundaryPoint b;
  if (bp.id.kind == BoundaryKind::Domain) {
    b = polygon_point(Polygon{domain_loop()}, false, bp.s, &at_vertex, &bisector);
  } else {
    b = polygon_point(polygons_[static_cast<std::size_t>(bp.id.obstacle)], true, bp.s, &at_vertex, &bisector);
  }
  return b.point + (at_vertex ? bisector : b.normal) * standoff();
}

double Environment::wall_length(int wall) const {
  if (dim() != 2 || wall < 0 || wall > 3) throw ConfigError("wall id must be 0..3 in a 2D domain");
  return wall % 2 == 0 ? domain_.upper.x - domain_.lower.x : domain_.upper.y - domain_.lower.y;
}

double Environment::wall_offset(int wall) const {
  double acc = 0.0;
  for (int w = 0; w < wall; ++w) acc += wall_length(w);
  wall_length(wall);
  return acc;
}

int Environment::wall_of(double s) const {
  const double total = boundary_length(BoundaryId{});
  s = wrap_periodic(s, total);
  double acc = 0.0;
  for (int w = 0; w < 4; ++w) {
    acc += wall_length(w);
    if (s < acc) return w;
  }
  return 3;
}

}  // namespace sensorplace
