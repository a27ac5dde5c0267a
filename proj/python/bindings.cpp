#include "tclab/curve_io.hpp"
#include "tclab/epiperimetric.hpp"
#include "tclab/errors.hpp"
#include "tclab/families.hpp"
#include "tclab/flat_homotopy.hpp"
#include "tclab/monotonicity.hpp"
#include "tclab/runner.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace tclab;

namespace {

WindingCurve curve_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  return curve_from_json(j);
}

py::dict verdict_dict(const EpiperimetricVerdict& v) {
  py::dict d;
  d["raw_excess"] = v.raw_excess;
  d["optimal_excess"] = v.optimal_excess;
  d["cone_gap"] = v.cone_gap;
  d["competitor_gap"] = v.competitor_gap;
  d["ratio"] = v.ratio;
  d["epsilon13"] = v.epsilon13;
  d["admissible"] = v.admissible;
  d["pass"] = v.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical checks for area-minimizing cones and currents";

  py::register_exception<Error>(m, "TclabError", PyExc_RuntimeError);

  py::class_<WindingCurve>(m, "WindingCurve")
      .def_static("from_json", &curve_from_text, py::arg("text"))
      .def_static("circle", &WindingCurve::circle, py::arg("Q"), py::arg("n"), py::arg("rho") = 1.0)
      .def_static("single_mode", &single_mode_curve, py::arg("Q"), py::arg("n"), py::arg("mode"), py::arg("amplitude"),
                  py::arg("rho") = 1.0, py::arg("direction") = Vec())
      .def("to_json", [](const WindingCurve& z) { return curve_to_json(z).dump(); })
      .def_property_readonly("Q", &WindingCurve::Q)
      .def_property_readonly("n", &WindingCurve::n)
      .def_property_readonly("rho", &WindingCurve::rho)
      .def_property_readonly("orientation", &WindingCurve::orientation)
      .def("point", &WindingCurve::point, py::arg("theta"))
      .def("lipschitz", &WindingCurve::lipschitz)
      .def("mass", &curve_mass)
      .def("cone_mass", [](const WindingCurve& z, bool spherical) { return cone_mass(ConeOverCurve(z, 1.0, spherical)); },
           py::arg("spherical") = true);

  m.def("epiperimetric_gap", [](const WindingCurve& z) { return verdict_dict(epiperimetric_gap(z)); }, py::arg("curve"));
  m.def("linearized_ratio", &linearized_ratio, py::arg("mode"), py::arg("Q"));
  m.def("optimal_excess", [](const WindingCurve& z) { return optimal_plane(z).excess; }, py::arg("curve"));
  m.def("cone_difference_bound", [](const WindingCurve& z) { return cone_difference_bound(z, z.base_plane()).bound; },
        py::arg("curve"));
  m.def(
      "closed_form_decay_constant",
      [](double epsilon12, double alpha0, double cbar, double eps, double r0) {
        return closed_form_decay_constant(DecayConstants{epsilon12, alpha0, cbar, eps}, r0);
      },
      py::arg("epsilon12"), py::arg("alpha0"), py::arg("cbar"), py::arg("eps"), py::arg("r0") = 1.0);

  m.def(
      "run_config",
      [](const std::string& config_text, const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
         std::optional<int> quad_order, int jobs) {
        nlohmann::json config;
        try {
          config = nlohmann::json::parse(config_text);
        } catch (const nlohmann::json::exception& e) {
          fail(ErrorCode::ParseError, e.what());
        }
        RunOptions opts;
        opts.out_dir = out_dir;
        opts.seed = seed;
        opts.quad_order = quad_order;
        opts.jobs = jobs;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_config(config, opts);
        }
        py::list rows;
        for (const ScenarioOutput& s : r.scenarios) {
          py::dict d;
          d["scenario"] = s.summary.scenario;
          d["kind"] = s.summary.kind;
          d["pass"] = s.summary.pass;
          d["fail"] = s.summary.fail;
          d["epsilon13"] = s.summary.epsilon13;
          d["gamma0"] = s.summary.gamma0;
          d["C"] = s.summary.c;
          d["error"] = s.summary.error;
          d["file"] = s.file_name;
          rows.append(d);
        }
        return py::make_tuple(r.exit_code, rows);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("seed") = py::none(), py::arg("quad_order") = py::none(),
      py::arg("jobs") = 1);
}
