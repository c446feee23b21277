#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sensorplace/optimizer.hpp"
#include "sensorplace/scenario.hpp"

namespace sensorplace {

struct RunOptions {
  std::optional<std::uint64_t> seed;  ///< overrides the scenario seed
  std::string out_dir;                ///< empty: write nothing
  bool wall_time = false;
};

struct RunResult {
  IdResult result;
  IdConfig config;  ///< resolved settings actually used
  std::uint64_t seed = 0;
  double hard_value = 0.0;
};

/// Optimizes the scenario. With an output directory, writes placement.txt,
/// trace.csv, coverage.txt, overlap.txt, scenario.json (plus .pgm maps and
/// per-sensor fields when enabled). Files written before a failure are removed.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace sensorplace
