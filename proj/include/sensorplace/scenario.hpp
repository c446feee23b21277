#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/objective.hpp"
#include "sensorplace/optimizer.hpp"
#include "sensorplace/placement.hpp"
#include "sensorplace/visibility.hpp"

namespace sensorplace {

/// One roster entry. Random coordinates are drawn from the scenario seed
/// when the initial placement is built.
struct SensorSpec {
  Sensor sensor;
  bool random_location = false;
  bool random_direction = false;
  int wall = -1;  ///< 2D domain wall (0..3) or polygon edge that restricts a random location; -1 = whole boundary
};

enum class WeightKind : std::uint8_t { None, Band, BandPolygons, BlindSpot, File };

struct WeightSource {
  WeightKind kind = WeightKind::None;
  int obstacle = 0;         ///< Band
  double width = 0.0;       ///< Band
  Polygon outer;            ///< BandPolygons
  Polygon inner;            ///< BandPolygons
  Sensor anchor;            ///< BlindSpot
  std::optional<Box> box;   ///< BlindSpot
  std::string path;         ///< File (grid dump)
};

struct OutputOptions {
  bool fields = false;     ///< also dump every per-sensor field
  bool pgm = true;         ///< greymaps next to the text dumps
  bool wall_time = false;  ///< record real seconds in the trace (otherwise 0, byte-stable)
};

struct Scenario {
  std::string name = "custom";
  std::string description;
  std::uint64_t seed = 0;
  Domain domain;
  std::vector<Polygon> polygons;
  std::vector<Box> boxes;
  std::vector<SensorSpec> sensors;
  std::optional<SymmetryTemplate> symmetry;
  ObjectiveMode mode = ObjectiveMode::Deterministic;
  WeightSource weight;
  IdConfig optimizer;
  OutputOptions output;
  std::string base_dir = ".";  ///< relative weight files resolve against this
};

/// Parses the JSON scenario format (see README). A "preset" key loads that
/// preset first and applies the remaining keys as a merge patch. Throws
/// ConfigError with line/column on syntax errors and with the offending
/// path (e.g. sensors[2].failure) on semantic errors.
Scenario parse_scenario(std::string_view text, const std::string& base_dir = ".");
/// Normalized dump: every default explicit, keys sorted, stable under re-parsing.
std::string dump_scenario(const Scenario& scenario);
/// File path, or "preset:NAME".
Scenario load_scenario(const std::string& source);

std::vector<std::string> preset_names();
/// Throws ConfigError listing the available presets for an unknown name.
Scenario preset(const std::string& name);
std::string preset_text(const std::string& name);

Environment build_environment(const Scenario& scenario);
ObjectiveSpec build_objective(const Scenario& scenario, const Environment& env);
/// Realized roster: random coordinates drawn from `seed`, redrawn until feasible.
std::vector<Sensor> initial_sensors(const Scenario& scenario, const Environment& env, std::uint64_t seed);
Placement build_placement(const Scenario& scenario, const Environment& env, std::uint64_t seed);

}  // namespace sensorplace
