#include <filesystem>
#include <string>

#include "doctest.h"
#include "sensorplace/errors.hpp"
#include "sensorplace/io.hpp"
#include "sensorplace/run.hpp"
#include "sensorplace/scenario.hpp"
#include "support.hpp"

using namespace sensorplace;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sensorplace_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal scenario gets defaults") {
  const Scenario sc = parse_scenario(R"({"domain": {"upper": [1, 1], "h": 0.05},
                                         "sensors": [{"point": [0.5, 0.5], "range": 0.3}]})");
  CHECK(sc.domain.dim == 2);
  REQUIRE(sc.sensors.size() == 1);
  const Sensor& s = sc.sensors[0].sensor;
  CHECK(s.failure == 0.0);
  CHECK(s.width == doctest::Approx(kPi / 2.0));
  CHECK(sc.weight.kind == WeightKind::None);
  CHECK(sc.mode == ObjectiveMode::Deterministic);
  const std::string dump = dump_scenario(sc);
  CHECK(dump.find("\"failure\": 0.0") != std::string::npos);
  CHECK(dump_scenario(parse_scenario(dump)) == dump);
}

TEST_CASE("semantic errors name the field") {
  const std::string base = R"({"domain": {"upper": [1, 1], "h": 0.05}, "sensors": [)";
  CHECK(error_of(base + R"({"point": [0.5, 0.5], "range": 0.3}, {"point": [0.2, 0.5], "range": 0.3, "failure": 1.5}]})")
            .find("sensors[1].failure") != std::string::npos);
  CHECK(error_of(base + R"({"point": [0.5, 0.5], "range": 0}]})").find("sensors[0].range") != std::string::npos);
  CHECK(error_of(base + R"({"point": [0.5, 0.5]}]})").find("sensors[0].range") != std::string::npos);
  CHECK(error_of(base + R"({"point": [0.5, 0.5], "range": 0.3, "rnage": 1}]})").find("sensors[0].rnage") !=
        std::string::npos);
}

TEST_CASE("syntax errors report line and column") {
  const std::string msg = error_of("{\n  \"domain\": {\"upper\": [1, 1],, \"h\": 0.05}\n}");
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("a sensor inside an obstacle is infeasible and named") {
  const Scenario sc = parse_scenario(R"({"domain": {"upper": [1, 1], "h": 0.05},
      "obstacles": [{"polygon": [[0.4, 0.4], [0.6, 0.4], [0.6, 0.6], [0.4, 0.6]]}],
      "sensors": [{"point": [0.1, 0.1], "range": 0.3}, {"point": [0.5, 0.5], "range": 0.3}]})");
  const Environment env = build_environment(sc);
  try {
    initial_sensors(sc, env, 0);
    FAIL("expected an infeasible sensor");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("sensors[1]") != std::string::npos);
  }
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 11);
  for (const auto& name : preset_names()) {
    const Scenario sc = preset(name);
    const std::string dump = dump_scenario(sc);
    CHECK_MESSAGE(dump_scenario(parse_scenario(dump)) == dump, name);
  }
  const Scenario fig4 = parse_scenario(R"({"preset": "fig4"})");
  REQUIRE(fig4.sensors.size() == 16);
  int bottom = 0;
  int top = 0;
  for (const auto& s : fig4.sensors) {
    CHECK(s.sensor.range == doctest::Approx(0.6));
    CHECK(s.sensor.width == doctest::Approx(kPi / 3.0));
    CHECK(s.random_location);
    bottom += s.wall == 0;
    top += s.wall == 2;
  }
  CHECK(bottom == 8);
  CHECK(top == 8);
  const Environment env = build_environment(fig4);
  CHECK(weighted_free_measure(env, build_objective(fig4, env)) == doctest::Approx(1.0));
  const auto sensors = initial_sensors(fig4, env, 3);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const double y = sensor_position(env, sensors[i]).y;
    CHECK((i < 8 ? y < 0.5 : y > 0.5));
  }

  const Scenario fig8 = preset("fig8-3d");
  CHECK(fig8.domain.dim == 3);
  CHECK(fig8.boxes[0].lower.x == 0.0);
  CHECK(fig8.boxes[0].upper.x == doctest::Approx(1.4));
  CHECK(fig8.boxes[0].upper.y == doctest::Approx(1.4));
  CHECK(fig8.boxes[0].upper.z == doctest::Approx(fig8.domain.upper.z));

  const std::string msg = error_of(R"({"preset": "nope"})");
  CHECK(msg.find("fig4") != std::string::npos);
  CHECK(msg.find("pentagon-sym") != std::string::npos);
}

TEST_CASE("preset overrides merge") {
  const Scenario sc = parse_scenario(R"({"preset": "fig4", "seed": 9, "optimizer": {"iterations": 3}})");
  CHECK(sc.seed == 9);
  CHECK(sc.optimizer.iterations == 3);
  CHECK(sc.optimizer.grad_max_iters == 500);
  CHECK(sc.sensors.size() == 16);
}

TEST_CASE("placement files round-trip") {
  const Scenario sc = preset("fig3");
  const Environment env = build_environment(sc);
  const auto sensors = initial_sensors(sc, env, 1);
  const std::string text = format_placement(env, sensors);
  const auto back = parse_placement(text);
  CHECK(back == sensors);
  CHECK(format_placement(env, back) == text);
  CHECK_THROWS_AS(parse_placement("0 fixed - 0 0 0 0 0.5 0.5\n"), ConfigError);
}

TEST_CASE("grid files round-trip") {
  const Environment env(Domain{3, {}, {0.2, 0.1, 0.1}, 0.05}, std::vector<Box>{});
  ScalarField f(env.grid(), FieldRole::Coverage);
  for (std::size_t n = 0; n < f.values.size(); ++n) f[n] = 0.1 * static_cast<double>(n) - 1.0 / 3.0;
  const ScalarField back = parse_grid(format_grid(f));
  CHECK(back.grid.matches(f.grid));
  CHECK(back.role == FieldRole::Coverage);
  CHECK(back.values == f.values);
  CHECK_THROWS_AS(parse_grid("dim 2\nh 0.1\n"), ConfigError);
}

TEST_CASE("trace format") {
  RunTrace t;
  t.records.push_back({0, 0.5, 0.5, 1.25});
  t.records.push_back({1, 0.25, 0.5, 2.5});
  CHECK(format_trace(t, false) == "iter,candidate,best,seconds\n0,0.5,0.5,0\n1,0.25,0.5,0\n");
  CHECK(format_trace(t, true) == "iter,candidate,best,seconds\n0,0.5,0.5,1.25\n1,0.25,0.5,2.5\n");
}

TEST_CASE("run writes its artifacts reproducibly") {
  Scenario sc = parse_scenario(R"({"domain": {"upper": [1, 1], "h": 0.05},
      "sensors": [{"point": [0.3, 0.3], "range": 0.4, "direction": 3.0},
                  {"boundary": {"kind": "domain", "s": 0.5}, "range": 0.4, "movable": true}],
      "optimizer": {"iterations": 0}})");
  const fs::path a = temp_dir("a");
  const fs::path b = temp_dir("b");
  const auto ra = run(sc, {std::nullopt, a.string(), false});
  run(sc, {std::nullopt, b.string(), false});
  for (const char* f : {"placement.txt", "trace.csv", "coverage.txt", "overlap.txt", "scenario.json",
                        "coverage.pgm", "overlap.pgm"}) {
    REQUIRE_MESSAGE(fs::exists(a / f), f);
    CHECK_MESSAGE(read_text_file((a / f).string()) == read_text_file((b / f).string()), f);
  }
  CHECK(ra.result.value >= ra.result.initial_value);
  CHECK(ra.result.trace.records.size() == 2);
  CHECK(dump_scenario(parse_scenario(read_text_file((a / "scenario.json").string()))) ==
        read_text_file((a / "scenario.json").string()));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failed runs leave no artifacts") {
  Scenario sc = parse_scenario(R"({"domain": {"upper": [1, 1], "h": 0.05},
      "sensors": [{"point": [0.3, 0.3], "range": 0.4}], "optimizer": {"iterations": 0},
      "objective": {"weight": {"type": "file", "path": "missing_weights.txt"}}})");
  const fs::path d = temp_dir("fail");
  CHECK_THROWS_AS(run(sc, {std::nullopt, d.string(), false}), IoError);
  CHECK((!fs::exists(d) || fs::is_empty(d)));
  fs::remove_all(d);
}
