#include "sensorplace/run.hpp"

#include <algorithm>
#include <filesystem>

#include "sensorplace/errors.hpp"
#include "sensorplace/io.hpp"

namespace sensorplace {

namespace fs = std::filesystem;

namespace {

class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }
  std::string path(const std::string& name) {
    written_.push_back(fs::path(dir_) / name);
    return written_.back().string();
  }
  void commit() { committed_ = true; }

 private:
  std::string dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
  const Environment env = build_environment(scenario);
  Evaluator eval(env, build_objective(scenario, env));

  RunResult out;
  out.seed = options.seed.value_or(scenario.seed);
  const Placement placement = build_placement(scenario, env, out.seed);
  IdConfig config = scenario.optimizer;
  config.seed = out.seed;
  out.config = config.resolved(env.grid().h, eval.free_measure());
  out.result = intermittent_diffusion(eval, placement, placement.initial(), out.config);
  const ObjectiveValue report = eval.evaluate(out.result.sensors);
  out.hard_value = report.hard_value;

  if (options.out_dir.empty()) return out;

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + options.out_dir + "': " + ec.message());
  const bool wall_time = options.wall_time || scenario.output.wall_time;

  OutputSet files(options.out_dir);
  write_text_file(files.path("placement.txt"), format_placement(env, out.result.sensors));
  write_text_file(files.path("trace.csv"), format_trace(out.result.trace, wall_time));
  std::vector<ScalarField> fields;
  for (const auto& s : out.result.sensors) fields.push_back(eval.field(s, false)->phi);
  const ScalarField cover =
      fields.empty() ? ScalarField(env.grid(), FieldRole::Coverage, -1.0) : union_coverage(fields);
  write_text_file(files.path("coverage.txt"), format_grid(cover));
  write_text_file(files.path("overlap.txt"), format_counts(report.overlap));
  Scenario echoed = scenario;
  echoed.seed = out.seed;
  echoed.optimizer.seed = out.seed;
  write_text_file(files.path("scenario.json"), dump_scenario(echoed));
  if (scenario.output.pgm) {
    write_pgm(files.path("coverage.pgm"), env.grid(), report.coverage_degree.values, 0.0, 1.0);
    std::vector<double> overlap(report.overlap.values.begin(), report.overlap.values.end());
    const double top = overlap.empty() ? 1.0 : std::max(1.0, *std::max_element(overlap.begin(), overlap.end()));
    write_pgm(files.path("overlap.pgm"), env.grid(), overlap, 0.0, top);
  }
  if (scenario.output.fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      write_text_file(files.path("field_" + std::to_string(i) + ".txt"), format_grid(fields[i]));
    }
  }
  files.commit();
  return out;
}

}  // namespace sensorplace
