#include "sensorplace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sensorplace/errors.hpp"
#include "sensorplace/io.hpp"

namespace sensorplace {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) fail(path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

bool flag_or(const json& obj, const char* key, bool fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) fail(join(path, key), "expected true or false");
  return obj.at(key).get<bool>();
}

int integer_or(const json& obj, const char* key, int fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

/// Number or the string "auto" (stored as 0).
double auto_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) return 0.0;
  const auto& v = obj.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return 0.0;
  const double x = number(v, join(path, key));
  if (!(x > 0.0)) fail(join(path, key), "must be positive or \"auto\"");
  return x;
}

Vec3 point(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) fail(path, "expected " + std::to_string(dim) + " coordinates");
  Vec3 p;
  for (int a = 0; a < dim; ++a) p[a] = number(j[static_cast<std::size_t>(a)], path + "[" + std::to_string(a) + "]");
  return p;
}

json to_json(const Vec3& p, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(p[i]);
  return a;
}

Polygon polygon(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of [x, y] vertices");
  Polygon poly;
  for (std::size_t i = 0; i < j.size(); ++i) poly.vertices.push_back(point(j[i], 2, path + "[" + std::to_string(i) + "]"));
  if (poly.vertices.size() < 3) fail(path, "a polygon needs at least 3 vertices");
  return poly;
}

json to_json(const Polygon& poly) {
  json a = json::array();
  for (const auto& v : poly.vertices) a.push_back(to_json(v, 2));
  return a;
}

Box box(const json& j, int dim, const std::string& path) {
  check_keys(j, path, {"lower", "upper"});
  if (!j.contains("lower") || !j.contains("upper")) fail(path, "a box needs lower and upper");
  Box b{point(j.at("lower"), dim, path + ".lower"), point(j.at("upper"), dim, path + ".upper")};
  for (int a = 0; a < dim; ++a) {
    if (!(b.upper[a] > b.lower[a])) fail(path, "upper must exceed lower on every axis");
  }
  return b;
}

json to_json(const Box& b, int dim) { return json{{"lower", to_json(b.lower, dim)}, {"upper", to_json(b.upper, dim)}}; }

// --- sensors ---------------------------------------------------------------

SensorSpec sensor_spec(const json& j, int dim, const std::string& path) {
  check_keys(j, path,
             {"point", "boundary", "range", "width", "failure", "direction", "polar", "direction_adjustable", "movable",
              "random_location", "random_direction", "count"});
  SensorSpec spec;
  Sensor& s = spec.sensor;
  if (j.contains("point") == j.contains("boundary")) fail(path, "give exactly one of point or boundary");
  if (j.contains("point")) {
    s.kind = LocationKind::Fixed;
    s.point = point(j.at("point"), dim, path + ".point");
    s.location_adjustable = false;
    if (j.contains("movable") && flag_or(j, "movable", false, path)) fail(path + ".movable", "fixed points cannot move");
    if (flag_or(j, "random_location", false, path)) fail(path + ".random_location", "only boundary sensors can be random");
  } else {
    const auto& b = j.at("boundary");
    const std::string bpath = path + ".boundary";
    check_keys(b, bpath, {"kind", "obstacle", "face", "s", "t", "wall", "edge"});
    s.kind = LocationKind::Boundary;
    const std::string kind = b.value("kind", std::string("domain"));
    if (kind == "domain") {
      s.boundary.id.kind = BoundaryKind::Domain;
      if (b.contains("obstacle")) fail(bpath + ".obstacle", "only valid for kind \"obstacle\"");
      if (b.contains("edge")) fail(bpath + ".edge", "use \"wall\" for the domain boundary");
      spec.wall = integer_or(b, "wall", -1, bpath);
      if (spec.wall < -1 || spec.wall > 3 || (spec.wall >= 0 && dim == 3)) fail(bpath + ".wall", "expected 0..3 (2D)");
    } else if (kind == "obstacle") {
      s.boundary.id.kind = BoundaryKind::Obstacle;
      s.boundary.id.obstacle = integer_or(b, "obstacle", 0, bpath);
      if (b.contains("wall")) fail(bpath + ".wall", "use \"edge\" for obstacle boundaries");
      spec.wall = integer_or(b, "edge", -1, bpath);
      if (spec.wall < -1 || (spec.wall >= 0 && dim == 3)) fail(bpath + ".edge", "expected a polygon edge index");
    } else {
      fail(bpath + ".kind", "expected \"domain\" or \"obstacle\"");
    }
    s.boundary.id.face = integer_or(b, "face", 0, bpath);
    if (dim == 2 && b.contains("face")) fail(bpath + ".face", "faces exist only in 3D");
    if (dim == 2 && b.contains("t")) fail(bpath + ".t", "t exists only in 3D");
    s.boundary.s = number_or(b, "s", 0.0, bpath);
    s.boundary.t = number_or(b, "t", 0.0, bpath);
    s.location_adjustable = flag_or(j, "movable", false, path);
    spec.random_location = flag_or(j, "random_location", false, path);
  }
  if (!j.contains("range")) fail(path + ".range", "missing (sensing range is required)");
  s.range = number(j.at("range"), path + ".range");
  if (!(s.range > 0.0)) fail(path + ".range", "must be positive");
  s.width = number_or(j, "width", kPi / 2.0, path);
  if (!(s.width > 0.0) || s.width > (dim == 2 ? kTwoPi : kPi) + 1e-12) {
    fail(path + ".width", dim == 2 ? "must lie in (0, 2pi]" : "must lie in (0, pi]");
  }
  s.failure = number_or(j, "failure", 0.0, path);
  if (!(s.failure >= 0.0 && s.failure < 1.0)) fail(path + ".failure", "must lie in [0, 1)");
  s.direction = number_or(j, "direction", 0.0, path);
  s.polar = number_or(j, "polar", kPi / 2.0, path);
  if (dim == 2 && j.contains("polar")) fail(path + ".polar", "polar angles exist only in 3D");
  s.direction_adjustable = flag_or(j, "direction_adjustable", true, path);
  spec.random_direction = flag_or(j, "random_direction", false, path);
  return spec;
}

json to_json(const Sensor& s, int dim) {
  json j;
  if (s.kind == LocationKind::Fixed) {
    j["point"] = to_json(s.point, dim);
  } else {
    json b;
    b["kind"] = s.boundary.id.kind == BoundaryKind::Domain ? "domain" : "obstacle";
    if (s.boundary.id.kind == BoundaryKind::Obstacle) b["obstacle"] = s.boundary.id.obstacle;
    b["s"] = s.boundary.s;
    if (dim == 3) {
      b["face"] = s.boundary.id.face;
      b["t"] = s.boundary.t;
    }
    j["boundary"] = b;
    j["movable"] = s.location_adjustable;
  }
  j["range"] = s.range;
  j["width"] = s.width;
  j["failure"] = s.failure;
  j["direction"] = s.direction;
  if (dim == 3) j["polar"] = s.polar;
  j["direction_adjustable"] = s.direction_adjustable;
  return j;
}

json to_json(const SensorSpec& spec, int dim) {
  json j = to_json(spec.sensor, dim);
  if (spec.sensor.kind == LocationKind::Boundary) {
    j["random_location"] = spec.random_location;
    if (spec.wall >= 0) j["boundary"][spec.sensor.boundary.id.kind == BoundaryKind::Domain ? "wall" : "edge"] = spec.wall;
  }
  j["random_direction"] = spec.random_direction;
  return j;
}

// --- presets ---------------------------------------------------------------

json poly_json(std::initializer_list<std::pair<double, double>> pts) {
  json a = json::array();
  for (const auto& [x, y] : pts) a.push_back({x, y});
  return json{{"polygon", a}};
}

json regular_polygon(double cx, double cy, double radius, int n, double start_deg) {
  json a = json::array();
  for (int k = 0; k < n; ++k) {
    const double t = (start_deg + 360.0 * k / n) * kPi / 180.0;
    a.push_back({cx + radius * std::cos(t), cy + radius * std::sin(t)});
  }
  return a;
}

json boundary_sensor(const char* kind, int obstacle, double s, double range, double width, double failure,
                     bool movable) {
  json b{{"kind", kind}, {"s", s}};
  if (std::string(kind) == "obstacle") b["obstacle"] = obstacle;
  return json{{"boundary", b}, {"range", range}, {"width", width}, {"failure", failure}, {"movable", movable},
              {"random_direction", true}};
}

json random_on(const char* kind, int obstacle, int restrict, double range, double width, double failure, int count) {
  json b{{"kind", kind}};
  if (std::string(kind) == "obstacle") {
    b["obstacle"] = obstacle;
    if (restrict >= 0) b["edge"] = restrict;
  } else if (restrict >= 0) {
    b["wall"] = restrict;
  }
  return json{{"boundary", b},           {"range", range},          {"width", width},
              {"failure", failure},      {"movable", true},         {"random_location", true},
              {"random_direction", true}, {"count", count}};
}

json optimizer_json(int iterations, int grad_max_iters) {
  return json{{"iterations", iterations}, {"grad_max_iters", grad_max_iters}};
}

json fig2_scene(bool movable) {
  const double r = 0.5;
  const double w = kPi / 2.0;
  json sensors = json::array({
      boundary_sensor("domain", 0, 0.6, r, w, 0.0, movable),
      boundary_sensor("domain", 0, 2.7, r, w, 0.0, movable),
      boundary_sensor("domain", 0, 5.2, r, w, 0.0, movable),
      boundary_sensor("domain", 0, 6.5, r, w, 0.0, movable),
      boundary_sensor("obstacle", 1, 0.2, r, w, 0.0, movable),
      boundary_sensor("obstacle", 2, 0.5, r, w, 0.0, movable),
      json{{"point", {1.0, 1.0}}, {"range", r}, {"width", w}, {"random_direction", true}},
      json{{"point", {1.6, 0.6}}, {"range", r}, {"width", w}, {"random_direction", true}},
  });
  return json{
      {"description", movable ? "Three polygons, 8 sensors; the 6 boundary sensors slide along their boundaries. "
                                "Polygon vertices are an approximate layout."
                              : "Three polygons, 8 sensors at fixed locations (6 on boundaries, 2 interior); only "
                                "viewing directions change. Polygon vertices are an approximate layout."},
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0}}, {"upper", {2.0, 2.0}}, {"h", 0.02}}},
      {"obstacles",
       {poly_json({{0.5, 1.2}, {0.9, 1.2}, {0.7, 1.6}}), poly_json({{1.2, 1.1}, {1.6, 1.1}, {1.6, 1.5}, {1.2, 1.5}}),
        poly_json({{0.7, 0.3}, {1.3, 0.4}, {1.2, 0.8}, {0.8, 0.7}})}},
      {"sensors", sensors},
      {"objective", {{"mode", "deterministic"}}},
      {"optimizer", optimizer_json(50, 500)},
  };
}

json fig45_scene(double failure) {
  json sensors = json::array({random_on("domain", 0, 0, 0.6, kPi / 3.0, failure, 8),
                              random_on("domain", 0, 2, 0.6, kPi / 3.0, failure, 8)});
  return json{
      {"description", "Obstacle-free unit square, 16 sensors starting at random on the bottom and top walls "
                      "(8 each), free to slide along the walls."},
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}, {"h", 0.02}}},
      {"obstacles", json::array()},
      {"sensors", sensors},
      {"objective", {{"mode", failure > 0.0 ? "expected" : "deterministic"}}},
      {"optimizer", optimizer_json(50, 500)},
  };
}

json alley_scene() {
  const double r = 0.8;
  const double w = kPi / 2.0;
  // Box [0,1.4]^2 (edges 1 and 2 face the alley) and an L along the top and
  // right walls, starting at (1.9, 0) (edges 4 and 5 face the alley).
  json sensors = json::array({random_on("obstacle", 0, 1, r, w, 0.5, 4), random_on("obstacle", 0, 2, r, w, 0.5, 4),
                              random_on("obstacle", 1, 4, r, w, 0.5, 4), random_on("obstacle", 1, 5, r, w, 0.5, 4)});
  return json{
      {"description", "Corner alley: block [0,1.4]^2 and an L-shaped wall 0.1 thick along the top and right "
                      "sides of [0,2]^2. 16 sensors, 4 per alley-facing edge."},
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0}}, {"upper", {2.0, 2.0}}, {"h", 0.02}}},
      {"obstacles",
       {poly_json({{0.0, 0.0}, {1.4, 0.0}, {1.4, 1.4}, {0.0, 1.4}}),
        poly_json({{1.9, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}, {0.0, 1.9}, {1.9, 1.9}})}},
      {"sensors", sensors},
      {"objective", {{"mode", "expected"}}},
      {"optimizer", optimizer_json(50, 500)},
  };
}

json city_scene() {
  const double r = 0.5;
  const double w = kPi / 3.0;
  json sensors = json::array();
  for (int b = 0; b < 5; ++b) sensors.push_back(random_on("obstacle", b, -1, r, w, 0.5, 3));
  return json{
      {"description", "Five building footprints in [0,1.5]^2 (approximate layout), 15 rooftop sensors sliding "
                      "along the building outlines."},
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0}}, {"upper", {1.5, 1.5}}, {"h", 0.02}}},
      {"obstacles",
       {poly_json({{0.2, 0.2}, {0.5, 0.2}, {0.5, 0.6}, {0.2, 0.6}}),
        poly_json({{0.8, 0.2}, {1.3, 0.2}, {1.3, 0.4}, {1.0, 0.4}, {1.0, 0.6}, {0.8, 0.6}}),
        poly_json({{0.2, 0.9}, {0.6, 0.9}, {0.4, 1.3}}),
        poly_json({{0.85, 0.85}, {1.15, 0.8}, {1.3, 1.0}, {1.1, 1.25}, {0.8, 1.1}}),
        poly_json({{0.62, 0.66}, {0.74, 0.66}, {0.74, 0.76}, {0.62, 0.76}})}},
      {"sensors", sensors},
      {"objective", {{"mode", "expected"}}},
      {"optimizer", optimizer_json(50, 500)},
  };
}

json pentagon_scene(bool symmetric) {
  const double r = 0.5;
  const double w = kPi / 2.0;
  const json building = regular_polygon(1.0, 1.0, 0.3, 5, 90.0);
  json j{
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0}}, {"upper", {2.0, 2.0}}, {"h", 0.0025}}},
      {"obstacles", {json{{"polygon", building}}}},
      {"objective",
       {{"mode", "expected"},
        {"weight",
         {{"type", "band_polygons"},
          {"outer", regular_polygon(1.0, 1.0, 0.6, 5, 90.0)},
          {"inner", regular_polygon(1.0, 1.0, 0.35, 5, 90.0)}}}}},
      {"optimizer", optimizer_json(50, 500)},
  };
  const double edge = 2.0 * 0.3 * std::sin(kPi / 5.0);
  if (symmetric) {
    j["description"] = "Regular pentagon (circumradius 0.3) with a monitored band between pentagons of "
                       "circumradius 0.35 and 0.6; 3 sensors per edge under the mirror constraint (2 DOF).";
    j["symmetry"] = {{"obstacle", 0}, {"range", r},          {"width", w},
                     {"failure", 0.5}, {"offset", 0.25 * edge}, {"mirror_angle", 0.3}};
    j["sensors"] = json::array();
  } else {
    j["description"] = "Regular pentagon (circumradius 0.3) with a monitored band between pentagons of "
                       "circumradius 0.35 and 0.6; 15 free sensors, 3 per edge initially (30 DOF).";
    json sensors = json::array();
    for (int e = 0; e < 5; ++e) {
      const double normal = (90.0 + 36.0 + 72.0 * e) * kPi / 180.0;
      for (int k = -1; k <= 1; ++k) {
        json s = boundary_sensor("obstacle", 0, edge * (e + 0.5 + 0.25 * k), r, w, 0.5, true);
        s["random_direction"] = false;
        s["direction"] = wrap_angle(normal - w / 2.0 - 0.3 * k);
        sensors.push_back(s);
      }
    }
    j["sensors"] = sensors;
  }
  return j;
}

json store_scene(double failure) {
  const double r = 1.05;
  const double w = kPi / 3.0;
  json anchor{{"point", {0.4, 0.4}}, {"range", 3.3}, {"width", kTwoPi}};
  return json{
      {"description", "Store floor [0,2.5]x[0,2] with four shelves (approximate layout). The weight is 1 on the "
                      "cashier's blind spots and on the box [0.2,0.6]^2 around the cashier; 9 wall sensors."},
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0}}, {"upper", {2.5, 2.0}}, {"h", 0.02}}},
      {"obstacles",
       {poly_json({{1.0, 0.3}, {1.2, 0.3}, {1.2, 1.0}, {1.0, 1.0}}),
        poly_json({{1.6, 0.3}, {1.8, 0.3}, {1.8, 1.0}, {1.6, 1.0}}),
        poly_json({{1.0, 1.3}, {2.0, 1.3}, {2.0, 1.5}, {1.0, 1.5}}),
        poly_json({{0.3, 1.2}, {0.7, 1.2}, {0.7, 1.4}, {0.3, 1.4}})}},
      {"sensors", json::array({random_on("domain", 0, -1, r, w, failure, 9)})},
      {"objective",
       {{"mode", "expected"},
        {"weight", {{"type", "blind_spot"}, {"anchor", anchor}, {"box", {{"lower", {0.2, 0.2}}, {"upper", {0.6, 0.6}}}}}}}},
      {"optimizer", optimizer_json(50, 500)},
  };
}

json fig8_scene() {
  const double r = 0.9;
  const double beta = half_angle_from_base_radius(0.9, 0.7);
  json sensors = json::array();
  // Block +x / +y faces, L-wall -y / -x faces.
  const std::array<std::pair<int, int>, 4> faces{{{0, 1}, {0, 3}, {1, 2}, {2, 0}}};
  for (const auto& [box, face] : faces) {
    json b{{"kind", "obstacle"}, {"obstacle", box}, {"face", face}};
    sensors.push_back(json{{"boundary", b},      {"range", r},       {"width", beta},
                           {"failure", 0.5},     {"movable", true},  {"random_location", true},
                           {"random_direction", true}, {"count", 2}});
  }
  return json{
      {"description", "3D corner alley: block [0,1.4]^2 and an L-shaped wall ([0,2]x[1.9,2] plus [1.9,2]x[0,1.9]) "
                      "in [0,2]^2 x [0,0.48]; the height is trimmed from 0.5 so that h = 0.04 divides it. 8 sensors, "
                      "2 per alley-facing face, cone half-angle asin(0.7/0.9)."},
      {"seed", 1},
      {"domain", {{"lower", {0.0, 0.0, 0.0}}, {"upper", {2.0, 2.0, 0.48}}, {"h", 0.04}}},
      {"obstacles",
       {json{{"box", {{"lower", {0.0, 0.0, 0.0}}, {"upper", {1.4, 1.4, 0.48}}}}},
        json{{"box", {{"lower", {0.0, 1.9, 0.0}}, {"upper", {2.0, 2.0, 0.48}}}}},
        json{{"box", {{"lower", {1.9, 0.0, 0.0}}, {"upper", {2.0, 1.9, 0.48}}}}}}},
      {"sensors", sensors},
      {"objective", {{"mode", "expected"}}},
      {"optimizer", optimizer_json(20, 40)},
  };
}

const std::map<std::string, std::function<json()>>& preset_table() {
  static const std::map<std::string, std::function<json()>> table{
      {"fig2", [] { return fig2_scene(false); }},
      {"fig3", [] { return fig2_scene(true); }},
      {"fig4", [] { return fig45_scene(0.0); }},
      {"fig5", [] { return fig45_scene(0.5); }},
      {"fig6-alley", alley_scene},
      {"fig-city", city_scene},
      {"pentagon-sym", [] { return pentagon_scene(true); }},
      {"pentagon-free", [] { return pentagon_scene(false); }},
      {"store-p05", [] { return store_scene(0.5); }},
      {"store-p01", [] { return store_scene(0.1); }},
      {"fig8-3d", fig8_scene},
  };
  return table;
}

json preset_json(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string list;
    for (const auto& [key, fn] : table) list += (list.empty() ? "" : ", ") + key;
    throw ConfigError("unknown preset '" + name + "'; available: " + list);
  }
  json j = it->second();
  j["name"] = name;
  return j;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// --- objective / optimizer sections -----------------------------------------

WeightSource weight_source(const json& j, int dim, const std::string& path) {
  WeightSource w;
  if (!j.is_object()) fail(path, "expected an object");
  const std::string type = j.value("type", std::string("none"));
  if (type == "none") {
    check_keys(j, path, {"type"});
  } else if (type == "band") {
    check_keys(j, path, {"type", "obstacle", "width"});
    w.kind = WeightKind::Band;
    w.obstacle = integer_or(j, "obstacle", 0, path);
    w.width = number_or(j, "width", 0.0, path);
    if (!(w.width > 0.0)) fail(path + ".width", "must be positive");
  } else if (type == "band_polygons") {
    check_keys(j, path, {"type", "outer", "inner"});
    if (dim != 2) fail(path, "polygon bands require a 2D domain");
    w.kind = WeightKind::BandPolygons;
    if (!j.contains("outer") || !j.contains("inner")) fail(path, "needs outer and inner polygons");
    w.outer = polygon(j.at("outer"), path + ".outer");
    w.inner = polygon(j.at("inner"), path + ".inner");
  } else if (type == "blind_spot") {
    check_keys(j, path, {"type", "anchor", "box"});
    w.kind = WeightKind::BlindSpot;
    if (!j.contains("anchor")) fail(path + ".anchor", "missing");
    w.anchor = sensor_spec(j.at("anchor"), dim, path + ".anchor").sensor;
    if (j.contains("box")) w.box = box(j.at("box"), dim, path + ".box");
  } else if (type == "file") {
    check_keys(j, path, {"type", "path"});
    w.kind = WeightKind::File;
    if (!j.contains("path") || !j.at("path").is_string()) fail(path + ".path", "expected a file name");
    w.path = j.at("path").get<std::string>();
  } else {
    fail(path + ".type", "expected none, band, band_polygons, blind_spot or file");
  }
  return w;
}

json to_json(const WeightSource& w, int dim) {
  switch (w.kind) {
    case WeightKind::None:
      return json{{"type", "none"}};
    case WeightKind::Band:
      return json{{"type", "band"}, {"obstacle", w.obstacle}, {"width", w.width}};
    case WeightKind::BandPolygons:
      return json{{"type", "band_polygons"}, {"outer", to_json(w.outer)}, {"inner", to_json(w.inner)}};
    case WeightKind::BlindSpot: {
      json j{{"type", "blind_spot"}, {"anchor", to_json(w.anchor, dim)}};
      if (w.box) j["box"] = to_json(*w.box, dim);
      return j;
    }
    case WeightKind::File:
      return json{{"type", "file"}, {"path", w.path}};
  }
  return json{};
}

IdConfig optimizer_config(const json& j, const std::string& path) {
  check_keys(j, path,
             {"iterations", "alpha", "gamma", "time_step", "h_v", "h_x", "grad_tol", "grad_max_iters",
              "location_noise"});
  IdConfig c;
  c.iterations = integer_or(j, "iterations", c.iterations, path);
  if (c.iterations < 0) fail(path + ".iterations", "must be >= 0");
  c.alpha = number_or(j, "alpha", c.alpha, path);
  if (!(c.alpha >= 0.0)) fail(path + ".alpha", "must be >= 0");
  c.gamma = auto_number(j, "gamma", path);
  c.time_step = number_or(j, "time_step", c.time_step, path);
  if (!(c.time_step > 0.0)) fail(path + ".time_step", "must be positive");
  c.h_v = auto_number(j, "h_v", path);
  c.h_x = auto_number(j, "h_x", path);
  c.grad_tol = auto_number(j, "grad_tol", path);
  c.grad_max_iters = integer_or(j, "grad_max_iters", c.grad_max_iters, path);
  if (c.grad_max_iters < 0) fail(path + ".grad_max_iters", "must be >= 0");
  c.location_noise = auto_number(j, "location_noise", path);
  return c;
}

json auto_or(double v) { return v == 0.0 ? json("auto") : json(v); }

json to_json(const IdConfig& c) {
  return json{{"iterations", c.iterations},     {"alpha", c.alpha},         {"gamma", auto_or(c.gamma)},
              {"time_step", c.time_step},       {"h_v", auto_or(c.h_v)},    {"h_x", auto_or(c.h_x)},
              {"grad_tol", auto_or(c.grad_tol)}, {"grad_max_iters", c.grad_max_iters},
              {"location_noise", auto_or(c.location_noise)}};
}

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
  check_keys(j, "", {"name", "description", "seed", "domain", "obstacles", "sensor_defaults", "sensors", "symmetry",
                     "objective", "optimizer", "output"});
  Scenario sc;
  sc.base_dir = base_dir;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) fail("name", "expected a string");
    sc.name = j.at("name").get<std::string>();
  }
  if (j.contains("description")) {
    if (!j.at("description").is_string()) fail("description", "expected a string");
    sc.description = j.at("description").get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0)) {
      fail("seed", "expected a non-negative integer");
    }
    sc.seed = j.at("seed").get<std::uint64_t>();
  }

  if (!j.contains("domain")) fail("domain", "missing");
  const auto& d = j.at("domain");
  check_keys(d, "domain", {"lower", "upper", "h"});
  if (!d.contains("upper")) fail("domain.upper", "missing");
  const auto& upper = d.at("upper");
  if (!upper.is_array() || (upper.size() != 2 && upper.size() != 3)) fail("domain.upper", "expected 2 or 3 coordinates");
  sc.domain.dim = static_cast<int>(upper.size());
  sc.domain.upper = point(upper, sc.domain.dim, "domain.upper");
  sc.domain.lower = d.contains("lower") ? point(d.at("lower"), sc.domain.dim, "domain.lower") : Vec3{};
  if (!d.contains("h")) fail("domain.h", "missing");
  sc.domain.h = number(d.at("h"), "domain.h");
  try {
    sc.domain.validate();
  } catch (const ConfigError& e) {
    fail("domain", e.what());
  }
  const int dim = sc.domain.dim;

  if (j.contains("obstacles")) {
    const auto& obs = j.at("obstacles");
    if (!obs.is_array()) fail("obstacles", "expected a list");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string p = "obstacles[" + std::to_string(i) + "]";
      check_keys(obs[i], p, {"polygon", "box"});
      if (obs[i].contains("polygon")) {
        if (dim != 2) fail(p, "polygons require a 2D domain");
        sc.polygons.push_back(polygon(obs[i].at("polygon"), p + ".polygon"));
      } else if (obs[i].contains("box")) {
        if (dim != 3) fail(p, "boxes require a 3D domain");
        sc.boxes.push_back(box(obs[i].at("box"), dim, p + ".box"));
      } else {
        fail(p, "expected polygon or box");
      }
    }
  }

  json defaults = json::object();
  if (j.contains("sensor_defaults")) {
    defaults = j.at("sensor_defaults");
    check_keys(defaults, "sensor_defaults", {"range", "width", "failure", "direction", "polar", "direction_adjustable",
                                             "movable", "random_location", "random_direction"});
  }
  if (j.contains("sensors")) {
    const auto& list = j.at("sensors");
    if (!list.is_array()) fail("sensors", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "sensors[" + std::to_string(i) + "]";
      if (!list[i].is_object()) fail(p, "expected an object");
      json entry = defaults;
      entry.update(list[i]);
      if (entry.contains("point")) {
        entry.erase("movable");
        entry.erase("random_location");
      }
      const int count = integer_or(entry, "count", 1, p);
      if (count < 1) fail(p + ".count", "must be >= 1");
      const SensorSpec spec = sensor_spec(entry, dim, p);
      for (int c = 0; c < count; ++c) sc.sensors.push_back(spec);
    }
  }

  if (j.contains("symmetry")) {
    const auto& s = j.at("symmetry");
    check_keys(s, "symmetry", {"obstacle", "range", "width", "failure", "offset", "mirror_angle"});
    if (dim != 2) fail("symmetry", "symmetry constraints require a 2D domain");
    if (!sc.sensors.empty()) fail("symmetry", "a symmetric scenario generates its own sensors; remove the sensor list");
    SymmetryTemplate t;
    t.obstacle = integer_or(s, "obstacle", 0, "symmetry");
    if (!s.contains("range")) fail("symmetry.range", "missing (sensing range is required)");
    t.range = number(s.at("range"), "symmetry.range");
    if (!(t.range > 0.0)) fail("symmetry.range", "must be positive");
    t.width = number_or(s, "width", kPi / 2.0, "symmetry");
    if (!(t.width > 0.0) || t.width > kTwoPi + 1e-12) fail("symmetry.width", "must lie in (0, 2pi]");
    t.failure = number_or(s, "failure", 0.0, "symmetry");
    if (!(t.failure >= 0.0 && t.failure < 1.0)) fail("symmetry.failure", "must lie in [0, 1)");
    t.offset = number_or(s, "offset", 0.0, "symmetry");
    if (t.offset < 0.0) fail("symmetry.offset", "must be >= 0");
    t.mirror_angle = number_or(s, "mirror_angle", 0.0, "symmetry");
    sc.symmetry = t;
  }

  if (j.contains("objective")) {
    const auto& o = j.at("objective");
    check_keys(o, "objective", {"mode", "weight"});
    const std::string mode = o.value("mode", std::string("deterministic"));
    if (mode == "deterministic") {
      sc.mode = ObjectiveMode::Deterministic;
    } else if (mode == "expected") {
      sc.mode = ObjectiveMode::Expected;
    } else {
      fail("objective.mode", "expected \"deterministic\" or \"expected\"");
    }
    if (o.contains("weight")) sc.weight = weight_source(o.at("weight"), dim, "objective.weight");
  }
  if (j.contains("optimizer")) sc.optimizer = optimizer_config(j.at("optimizer"), "optimizer");
  sc.optimizer.seed = sc.seed;
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"fields", "pgm", "wall_time"});
    sc.output.fields = flag_or(o, "fields", false, "output");
    sc.output.pgm = flag_or(o, "pgm", true, "output");
    sc.output.wall_time = flag_or(o, "wall_time", false, "output");
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError("scenario syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + what);
  }
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) fail("preset", "expected a preset name");
    json base = preset_json(j.at("preset").get<std::string>());
    j.erase("preset");
    base.merge_patch(j);
    j = std::move(base);
  }
  return scenario_from_json(j, base_dir);
}

std::string dump_scenario(const Scenario& sc) {
  const int dim = sc.domain.dim;
  json j;
  j["name"] = sc.name;
  j["description"] = sc.description;
  j["seed"] = sc.seed;
  j["domain"] = {{"lower", to_json(sc.domain.lower, dim)}, {"upper", to_json(sc.domain.upper, dim)}, {"h", sc.domain.h}};
  json obs = json::array();
  for (const auto& p : sc.polygons) obs.push_back(json{{"polygon", to_json(p)}});
  for (const auto& b : sc.boxes) obs.push_back(json{{"box", to_json(b, dim)}});
  j["obstacles"] = obs;
  json sensors = json::array();
  for (const auto& s : sc.sensors) sensors.push_back(to_json(s, dim));
  j["sensors"] = sensors;
  if (sc.symmetry) {
    const auto& t = *sc.symmetry;
    j["symmetry"] = {{"obstacle", t.obstacle}, {"range", t.range},   {"width", t.width},
                     {"failure", t.failure},   {"offset", t.offset}, {"mirror_angle", t.mirror_angle}};
  }
  j["objective"] = {{"mode", std::string(to_string(sc.mode))}, {"weight", to_json(sc.weight, dim)}};
  j["optimizer"] = to_json(sc.optimizer);
  j["output"] = {{"fields", sc.output.fields}, {"pgm", sc.output.pgm}, {"wall_time", sc.output.wall_time}};
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& source) {
  constexpr std::string_view prefix = "preset:";
  if (source.rfind(prefix, 0) == 0) return preset(source.substr(prefix.size()));
  const std::string text = read_text_file(source);
  const auto parent = std::filesystem::path(source).parent_path();
  return parse_scenario(text, parent.empty() ? std::string(".") : parent.string());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : preset_table()) out.push_back(name);
  return out;
}

std::string preset_text(const std::string& name) { return preset_json(name).dump(2) + "\n"; }

Scenario preset(const std::string& name) { return scenario_from_json(preset_json(name), "."); }

Environment build_environment(const Scenario& sc) {
  if (sc.domain.dim == 2) return Environment(sc.domain, sc.polygons);
  return Environment(sc.domain, sc.boxes);
}

ObjectiveSpec build_objective(const Scenario& sc, const Environment& env) {
  ObjectiveSpec spec;
  spec.mode = sc.mode;
  switch (sc.weight.kind) {
    case WeightKind::None:
      break;
    case WeightKind::Band:
      spec.weight = band_weight(env, sc.weight.obstacle, sc.weight.width);
      spec.band = true;
      break;
    case WeightKind::BandPolygons:
      spec.weight = band_weight(env, sc.weight.outer, sc.weight.inner);
      spec.band = true;
      break;
    case WeightKind::BlindSpot:
      spec.weight = blind_spot_weight(env, sc.weight.anchor, sc.weight.box);
      break;
    case WeightKind::File: {
      std::filesystem::path p(sc.weight.path);
      if (p.is_relative()) p = std::filesystem::path(sc.base_dir) / p;
      ScalarField w = read_grid(p.string());
      if (w.grid.dim != env.dim()) throw ConfigError("weight file dimension does not match the domain");
      w.role = FieldRole::Weight;
      spec.weight = std::move(w);
      break;
    }
  }
  spec.validate();
  return spec;
}

std::vector<Sensor> initial_sensors(const Scenario& sc, const Environment& env, std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Sensor> out;
  for (std::size_t i = 0; i < sc.sensors.size(); ++i) {
    const auto& spec = sc.sensors[i];
    const std::string p = "sensors[" + std::to_string(i) + "]";
    Sensor s = spec.sensor;
    if (s.kind == LocationKind::Boundary) {
      try {
        env.validate_boundary(s.boundary.id);
      } catch (const ConfigError& e) {
        fail(p + ".boundary", e.what());
      }
    }
    constexpr int kMaxDraws = 1000;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxDraws && !placed; ++attempt) {
      if (spec.random_location) {
        if (env.dim() == 2) {
          double lo = 0.0;
          double len = env.boundary_length(s.boundary.id);
          if (spec.wall >= 0) {
            if (s.boundary.id.kind == BoundaryKind::Domain) {
              lo = env.wall_offset(spec.wall);
              len = env.wall_length(spec.wall);
            } else {
              const auto& v = env.polygons()[static_cast<std::size_t>(s.boundary.id.obstacle)].vertices;
              if (static_cast<std::size_t>(spec.wall) >= v.size()) fail(p + ".boundary.edge", "no such polygon edge");
              lo = 0.0;
              for (int e = 0; e < spec.wall; ++e) lo += distance(v[e], v[(e + 1) % v.size()]);
              len = distance(v[spec.wall], v[(spec.wall + 1) % v.size()]);
            }
          }
          s.boundary.s = lo + rng.uniform() * len;
        } else {
          const auto [ls, lt] = env.face_extent(s.boundary.id);
          s.boundary.s = rng.uniform() * ls;
          s.boundary.t = rng.uniform() * lt;
        }
      }
      if (spec.random_direction) {
        s.direction = kTwoPi * rng.uniform();
        if (env.dim() == 3) s.polar = std::acos(std::clamp(1.0 - 2.0 * rng.uniform(), -1.0, 1.0));
      }
      placed = is_feasible(env, s);
      if (!spec.random_location) break;
    }
    if (!placed) {
      try {
        check_sensor(env, s);
      } catch (const InfeasibleError& e) {
        throw InfeasibleError(p + ": " + e.what());
      } catch (const ConfigError& e) {
        fail(p, e.what());
      }
      throw InfeasibleError(p + ": no feasible random location found");
    }
    out.push_back(s);
  }
  return out;
}

Placement build_placement(const Scenario& sc, const Environment& env, std::uint64_t seed) {
  if (sc.symmetry) return Placement::symmetric(env, *sc.symmetry);
  return Placement::identity(env, initial_sensors(sc, env, seed));
}

}  // namespace sensorplace
