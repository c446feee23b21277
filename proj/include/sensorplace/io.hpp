#pragma once

#include <span>
#include <string>
#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/grid.hpp"
#include "sensorplace/optimizer.hpp"
#include "sensorplace/visibility.hpp"

namespace sensorplace {

/// Throws IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// One line per sensor:
///   id kind bkind obstacle face s t x y z direction polar range width failure dir_adj loc_adj
/// kind is fixed|boundary, bkind domain|obstacle|-. x y z is the evaluation
/// point (informational for boundary sensors). Doubles use %.17g.
std::string format_placement(const Environment& env, std::span<const Sensor> sensors);
std::vector<Sensor> parse_placement(const std::string& text);
std::vector<Sensor> read_placement(const std::string& path);

/// Header (dim, origin, h, nodes, role) followed by one text row per grid
/// line along x; rows run over y, then z.
std::string format_grid(const ScalarField& field);
std::string format_counts(const CountField& field);
ScalarField parse_grid(const std::string& text);
ScalarField read_grid(const std::string& path);

/// Binary greymap of values mapped linearly from [lo, hi] to 0..255, row 0
/// at the top (largest y). 3D fields write their middle z slice.
void write_pgm(const std::string& path, const Grid& grid, std::span<const double> values, double lo, double hi);

/// iter,candidate,best,seconds. Seconds are written as 0 unless wall_time.
std::string format_trace(const RunTrace& trace, bool wall_time);

}  // namespace sensorplace
