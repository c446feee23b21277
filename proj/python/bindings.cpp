#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sensorplace/errors.hpp"
#include "sensorplace/io.hpp"
#include "sensorplace/objective.hpp"
#include "sensorplace/optimizer.hpp"
#include "sensorplace/run.hpp"
#include "sensorplace/scenario.hpp"

namespace py = pybind11;
namespace sp = sensorplace;

namespace {

py::array_t<double> to_array(const sp::ScalarField& f) {
  const auto& n = f.grid.nodes;
  std::vector<py::ssize_t> shape;
  if (f.grid.dim == 3) shape.push_back(n[2]);
  shape.push_back(n[1]);
  shape.push_back(n[0]);
  py::array_t<double> out(shape);
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

struct Loaded {
  sp::Scenario scenario;
  sp::Environment env;
  sp::ObjectiveSpec spec;

  explicit Loaded(const sp::Scenario& sc)
      : scenario(sc), env(sp::build_environment(sc)), spec(sp::build_objective(sc, env)) {}
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sensor placement by level-set coverage and intermittent diffusion";

  static py::exception<sp::Error> error(m, "Error");
  static py::exception<sp::ConfigError> config_error(m, "ConfigError", error.ptr());
  static py::exception<sp::InfeasibleError> infeasible_error(m, "InfeasibleError", error.ptr());
  static py::exception<sp::IoError> io_error(m, "IoError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sp::ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const sp::InfeasibleError& e) {
      py::set_error(infeasible_error, e.what());
    } catch (const sp::IoError& e) {
      py::set_error(io_error, e.what());
    } catch (const sp::Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<sp::Scenario>(m, "Scenario")
      .def_static("parse", &sp::parse_scenario, py::arg("text"), py::arg("base_dir") = ".")
      .def_static("load", &sp::load_scenario, py::arg("source"))
      .def_static("preset", &sp::preset, py::arg("name"))
      .def("dump", &sp::dump_scenario)
      .def_readwrite("name", &sp::Scenario::name)
      .def_readwrite("seed", &sp::Scenario::seed)
      .def_property_readonly("dim", [](const sp::Scenario& s) { return s.domain.dim; })
      .def_property_readonly("h", [](const sp::Scenario& s) { return s.domain.h; })
      .def_property_readonly("sensor_count",
                             [](const sp::Scenario& s) {
                               return s.symmetry ? std::size_t{0} : s.sensors.size();
                             })
      .def_property(
          "iterations", [](const sp::Scenario& s) { return s.optimizer.iterations; },
          [](sp::Scenario& s, int n) {
            if (n < 0) throw sp::ConfigError("iterations must be >= 0");
            s.optimizer.iterations = n;
          })
      .def("__repr__", [](const sp::Scenario& s) { return "<Scenario " + s.name + ">"; });

  m.def("presets", &sp::preset_names);
  m.def("preset_text", &sp::preset_text, py::arg("name"));
  m.def("heaviside_reg", &sp::heaviside_reg, py::arg("phi"), py::arg("eps"));

  m.def(
      "solve",
      [](const sp::Scenario& sc, std::optional<std::uint64_t> seed, const std::string& out_dir) {
        sp::RunResult r;
        {
          py::gil_scoped_release release;
          r = sp::run(sc, {seed, out_dir, false});
        }
        const sp::Environment env = sp::build_environment(sc);
        py::list trace;
        for (const auto& t : r.result.trace.records) trace.append(py::make_tuple(t.iteration, t.candidate, t.best));
        py::dict d;
        d["initial"] = r.result.initial_value;
        d["final"] = r.result.value;
        d["hard"] = r.hard_value;
        d["seed"] = r.seed;
        d["trace"] = trace;
        d["placement"] = sp::format_placement(env, r.result.sensors);
        return d;
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("out_dir") = "",
      "Run intermittent diffusion; returns initial/final values, the trace and the placement text.");

  m.def(
      "initial_placement",
      [](const sp::Scenario& sc, std::optional<std::uint64_t> seed) {
        const sp::Environment env = sp::build_environment(sc);
        const auto p = sp::build_placement(sc, env, seed.value_or(sc.seed));
        return sp::format_placement(env, p.expand(p.initial()));
      },
      py::arg("scenario"), py::arg("seed") = py::none());

  m.def(
      "evaluate",
      [](const sp::Scenario& sc, const std::string& placement) {
        Loaded l(sc);
        sp::Evaluator eval(l.env, l.spec);
        const auto v = eval.evaluate(sp::parse_placement(placement));
        py::dict d;
        d["value"] = v.value;
        d["hard"] = v.hard_value;
        d["mode"] = std::string(sp::to_string(v.mode));
        d["free_measure"] = eval.free_measure();
        return d;
      },
      py::arg("scenario"), py::arg("placement"));

  m.def(
      "coverage",
      [](const sp::Scenario& sc, const std::string& placement) {
        Loaded l(sc);
        sp::Evaluator eval(l.env, l.spec);
        std::vector<sp::ScalarField> fields;
        for (const auto& s : sp::parse_placement(placement)) fields.push_back(eval.field(s, false)->phi);
        if (fields.empty()) return to_array(sp::ScalarField(l.env.grid(), sp::FieldRole::Coverage, -1.0));
        return to_array(sp::union_coverage(fields));
      },
      py::arg("scenario"), py::arg("placement"),
      "Union coverage field as an array indexed [z,] y, x.");
}
