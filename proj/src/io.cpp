#include "sensorplace/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sensorplace/errors.hpp"

namespace sensorplace {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + tok + "'");
  }
}

int parse_int(const std::string& tok, const std::string& where) {
  const double v = parse_double(tok, where);
  if (v != std::floor(v)) throw ConfigError(where + ": expected an integer, got '" + tok + "'");
  return static_cast<int>(v);
}

bool parse_flag(const std::string& tok, const std::string& where) {
  if (tok == "0") return false;
  if (tok == "1") return true;
  throw ConfigError(where + ": expected 0 or 1, got '" + tok + "'");
}

std::string grid_header(const Grid& g, std::string_view role) {
  std::string s = "# sensorplace grid\n";
  s += "dim " + std::to_string(g.dim) + "\n";
  s += "origin " + fmt(g.origin.x) + " " + fmt(g.origin.y) + " " + fmt(g.origin.z) + "\n";
  s += "h " + fmt(g.h) + "\n";
  s += "nodes " + std::to_string(g.nodes[0]) + " " + std::to_string(g.nodes[1]) + " " + std::to_string(g.nodes[2]) +
       "\n";
  s += "role " + std::string(role) + "\n";
  return s;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

std::string format_placement(const Environment& env, std::span<const Sensor> sensors) {
  std::string out =
      "# id kind bkind obstacle face s t x y z direction polar range width failure dir_adj loc_adj\n";
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const Sensor& s = sensors[i];
    const Vec3 x = sensor_position(env, s);
    const bool b = s.kind == LocationKind::Boundary;
    out += std::to_string(i);
    out += b ? " boundary " : " fixed ";
    out += !b ? "-" : (s.boundary.id.kind == BoundaryKind::Domain ? "domain" : "obstacle");
    out += " " + std::to_string(b ? s.boundary.id.obstacle : 0) + " " + std::to_string(b ? s.boundary.id.face : 0);
    out += " " + fmt(b ? s.boundary.s : 0.0) + " " + fmt(b ? s.boundary.t : 0.0);
    out += " " + fmt(x.x) + " " + fmt(x.y) + " " + fmt(x.z);
    out += " " + fmt(s.direction) + " " + fmt(s.polar) + " " + fmt(s.range) + " " + fmt(s.width) + " " +
           fmt(s.failure);
    out += std::string(" ") + (s.direction_adjustable ? "1" : "0") + " " + (s.location_adjustable ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<Sensor> parse_placement(const std::string& text) {
  std::vector<Sensor> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    const std::string where = "placement line " + std::to_string(lineno);
    if (tok.size() != 17) throw ConfigError(where + ": expected 17 columns, got " + std::to_string(tok.size()));
    Sensor s;
    if (tok[1] == "fixed") {
      s.kind = LocationKind::Fixed;
      s.point = {parse_double(tok[7], where), parse_double(tok[8], where), parse_double(tok[9], where)};
    } else if (tok[1] == "boundary") {
      s.kind = LocationKind::Boundary;
      if (tok[2] == "domain") {
        s.boundary.id.kind = BoundaryKind::Domain;
      } else if (tok[2] == "obstacle") {
        s.boundary.id.kind = BoundaryKind::Obstacle;
      } else {
        throw ConfigError(where + ": boundary kind must be domain or obstacle");
      }
      s.boundary.id.obstacle = parse_int(tok[3], where);
      s.boundary.id.face = parse_int(tok[4], where);
      s.boundary.s = parse_double(tok[5], where);
      s.boundary.t = parse_double(tok[6], where);
    } else {
      throw ConfigError(where + ": kind must be fixed or boundary");
    }
    s.direction = parse_double(tok[10], where);
    s.polar = parse_double(tok[11], where);
    s.range = parse_double(tok[12], where);
    s.width = parse_double(tok[13], where);
    s.failure = parse_double(tok[14], where);
    s.direction_adjustable = parse_flag(tok[15], where);
    s.location_adjustable = parse_flag(tok[16], where);
    if (s.kind == LocationKind::Fixed && s.location_adjustable) {
      throw ConfigError(where + ": a fixed point cannot be movable");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Sensor> read_placement(const std::string& path) { return parse_placement(read_text_file(path)); }

std::string format_grid(const ScalarField& field) {
  std::string out = grid_header(field.grid, to_string(field.role));
  out.reserve(out.size() + field.values.size() * 24);
  const auto nx = static_cast<std::size_t>(field.grid.nodes[0]);
  for (std::size_t n = 0; n < field.values.size(); ++n) out += fmt(field.values[n]) + ((n + 1) % nx == 0 ? "\n" : " ");
  return out;
}

std::string format_counts(const CountField& field) {
  std::string out = grid_header(field.grid, "count");
  const auto nx = static_cast<std::size_t>(field.grid.nodes[0]);
  for (std::size_t n = 0; n < field.values.size(); ++n) {
    out += std::to_string(field.values[n]) + ((n + 1) % nx == 0 ? "\n" : " ");
  }
  return out;
}

ScalarField parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Grid g;
  std::string role = "other";
  bool have_nodes = false;
  bool have_h = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dim") {
      ls >> g.dim;
    } else if (key == "origin") {
      ls >> g.origin.x >> g.origin.y >> g.origin.z;
    } else if (key == "h") {
      ls >> g.h;
      have_h = true;
    } else if (key == "nodes") {
      ls >> g.nodes[0] >> g.nodes[1] >> g.nodes[2];
      have_nodes = true;
    } else if (key == "role") {
      ls >> role;
      break;
    } else {
      throw ConfigError("grid file: unexpected header line '" + line + "'");
    }
    if (ls.fail()) throw ConfigError("grid file: malformed header line '" + line + "'");
  }
  if (!have_nodes || !have_h || (g.dim != 2 && g.dim != 3) || !(g.h > 0.0) || g.nodes[0] < 1 || g.nodes[1] < 1 ||
      g.nodes[2] < 1) {
    throw ConfigError("grid file: incomplete or invalid header");
  }
  FieldRole r = FieldRole::Other;
  if (role == "environment") r = FieldRole::Environment;
  if (role == "coverage") r = FieldRole::Coverage;
  if (role == "weight") r = FieldRole::Weight;
  ScalarField f(g, r);
  for (std::size_t n = 0; n < f.values.size(); ++n) {
    std::string tok;
    if (!(in >> tok)) throw ConfigError("grid file: expected " + std::to_string(f.values.size()) + " values");
    f.values[n] = parse_double(tok, "grid file value " + std::to_string(n));
  }
  std::string extra;
  if (in >> extra) throw ConfigError("grid file: trailing data after the last value");
  return f;
}

ScalarField read_grid(const std::string& path) { return parse_grid(read_text_file(path)); }

void write_pgm(const std::string& path, const Grid& grid, std::span<const double> values, double lo, double hi) {
  if (values.size() != grid.size()) throw GridMismatchError("pgm: value count does not match the grid");
  const int nx = grid.nodes[0];
  const int ny = grid.nodes[1];
  const int k = grid.dim == 3 ? grid.nodes[2] / 2 : 0;
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      const double t = std::clamp((values[grid.index(i, j, k)] - lo) / span, 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  }
  write_text_file(path, out);
}

std::string format_trace(const RunTrace& trace, bool wall_time) {
  std::string out = "iter,candidate,best,seconds\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.iteration) + "," + fmt(r.candidate) + "," + fmt(r.best) + "," +
           (wall_time ? fmt(r.seconds) : std::string("0")) + "\n";
  }
  return out;
}

}  // namespace sensorplace
