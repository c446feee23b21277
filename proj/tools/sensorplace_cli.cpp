// Command-line front end: solve, evaluate, coverage-map, oracle-check, presets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sensorplace/errors.hpp"
#include "sensorplace/io.hpp"
#include "sensorplace/oracle.hpp"
#include "sensorplace/run.hpp"
#include "sensorplace/scenario.hpp"

namespace sp = sensorplace;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_solve(const std::string& source, std::optional<std::uint64_t> seed, const std::string& out_dir,
              bool wall_time, std::optional<int> iterations) {
  sp::Scenario sc = sp::load_scenario(source);
  if (iterations) {
    if (*iterations < 0) throw sp::ConfigError("--iterations must be >= 0");
    sc.optimizer.iterations = *iterations;
  }
  sp::RunOptions opt;
  opt.seed = seed;
  opt.out_dir = out_dir;
  opt.wall_time = wall_time;
  const auto r = sp::run(sc, opt);
  std::cout << "initial=" << g17(r.result.initial_value) << " final=" << g17(r.result.value) << "\n";
  return 0;
}

int cmd_evaluate(const std::string& source, const std::string& placement) {
  const sp::Scenario sc = sp::load_scenario(source);
  const sp::Environment env = sp::build_environment(sc);
  sp::Evaluator eval(env, sp::build_objective(sc, env));
  const auto sensors = sp::read_placement(placement);
  const auto v = eval.evaluate(sensors);
  std::cout << "mode=" << sp::to_string(v.mode) << " value=" << g17(v.value) << " hard=" << g17(v.hard_value)
            << " free=" << g17(eval.free_measure()) << "\n";
  return 0;
}

int cmd_coverage_map(const std::string& source, const std::string& placement, const std::string& out,
                     const std::string& pgm) {
  const sp::Scenario sc = sp::load_scenario(source);
  const sp::Environment env = sp::build_environment(sc);
  sp::Evaluator eval(env, sp::build_objective(sc, env));
  const auto sensors = sp::read_placement(placement);
  std::vector<sp::ScalarField> fields;
  for (const auto& s : sensors) fields.push_back(eval.field(s, false)->phi);
  const sp::ScalarField cover =
      fields.empty() ? sp::ScalarField(env.grid(), sp::FieldRole::Coverage, -1.0) : sp::union_coverage(fields);
  if (out.empty() || out == "-") {
    std::cout << sp::format_grid(cover);
  } else {
    sp::write_text_file(out, sp::format_grid(cover));
  }
  if (!pgm.empty()) sp::write_pgm(pgm, env.grid(), eval.evaluate(sensors).coverage_degree.values, 0.0, 1.0);
  return 0;
}

int cmd_oracle_check(const std::string& source, const std::string& placement, int only, const std::string& mask) {
  const sp::Scenario sc = sp::load_scenario(source);
  const sp::Environment env = sp::build_environment(sc);
  const auto sensors = sp::read_placement(placement);
  if (only >= static_cast<int>(sensors.size())) throw sp::ConfigError("--sensor index out of range");
  std::vector<double> combined(env.grid().size(), 0.0);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (only >= 0 && static_cast<int>(i) != only) continue;
    const auto phi = sp::compute_coverage(env, sensors[i]);
    const auto rep = sp::oracle_coverage_check(env, sensors[i], phi);
    std::printf("sensor=%zu agree=%zu disagree=%zu excluded=%zu free=%zu agreement=%.6f area=%.6f area_half_width=%.6f\n",
                i, rep.agree, rep.disagree, rep.excluded, rep.free_nodes, rep.agreement(), rep.area,
                rep.area_half_width);
    for (std::size_t n = 0; n < combined.size(); ++n) {
      // Disagreement dominates exclusion in the combined mask.
      const int m = rep.mask.values[n];
      if (m == 1) combined[n] = 2.0;
      if (m == 2 && combined[n] == 0.0) combined[n] = 1.0;
    }
  }
  if (!mask.empty()) {
    // white = agree, grey = excluded, black = disagree
    for (double& v : combined) v = v == 0.0 ? 1.0 : (v == 1.0 ? 0.6 : 0.0);
    sp::write_pgm(mask, env.grid(), combined, 0.0, 1.0);
  }
  return 0;
}

int cmd_presets(const std::string& name) {
  if (!name.empty()) {
    std::cout << sp::preset_text(name);
    return 0;
  }
  for (const auto& n : sp::preset_names()) std::cout << n << "  " << sp::preset(n).description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor placement by level-set coverage and intermittent diffusion"};
  app.require_subcommand(1);

  std::string scenario;
  std::string placement;

  auto* solve = app.add_subcommand("solve", "optimize a scenario (file or preset:NAME)");
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::string out_dir;
  bool wall_time = false;
  solve->add_option("scenario", scenario, "scenario JSON file or preset:NAME")->required();
  solve->add_option("--seed", seed, "override the scenario seed");
  solve->add_option("--out", out_dir, "directory for placement, trace and field dumps");
  solve->add_option("--iterations", iterations, "override the number of diffusion rounds N");
  solve->add_flag("--wall-time", wall_time, "record elapsed seconds in the trace (breaks byte-reproducibility)");

  auto* evaluate = app.add_subcommand("evaluate", "objective value of a placement file");
  evaluate->add_option("scenario", scenario)->required();
  evaluate->add_option("placement", placement)->required();

  auto* cover = app.add_subcommand("coverage-map", "union coverage field of a placement");
  std::string cover_out;
  std::string cover_pgm;
  cover->add_option("scenario", scenario)->required();
  cover->add_option("placement", placement)->required();
  cover->add_option("--out", cover_out, "grid dump path (default: stdout)");
  cover->add_option("--pgm", cover_pgm, "greymap of the covered fraction");

  auto* oracle = app.add_subcommand("oracle-check", "compare level-set coverage with ray casting");
  int only = -1;
  std::string mask;
  oracle->add_option("scenario", scenario)->required();
  oracle->add_option("placement", placement)->required();
  oracle->add_option("--sensor", only, "check one sensor (default: all)");
  oracle->add_option("--mask", mask, "greymap of disagreements (black) and excluded nodes (grey)");

  auto* presets = app.add_subcommand("presets", "list presets, or print one as JSON");
  std::string preset_name;
  presets->add_option("name", preset_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(scenario, seed, out_dir, wall_time, iterations);
    if (*evaluate) return cmd_evaluate(scenario, placement);
    if (*cover) return cmd_coverage_map(scenario, placement, cover_out, cover_pgm);
    if (*oracle) return cmd_oracle_check(scenario, placement, only, mask);
    if (*presets) return cmd_presets(preset_name);
  } catch (const sp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const sp::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sp::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
