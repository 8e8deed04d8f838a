#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "sts/amr.hpp"
#include "sts/config.hpp"
#include "sts/convergence.hpp"
#include "sts/diagnostics.hpp"
#include "sts/errors.hpp"
#include "sts/io.hpp"
#include "sts/monotone.hpp"

namespace py = pybind11;

namespace {

sts::Problem parse_problem(const std::string& name) {
  if (name == "semilinear_heat") return sts::Problem::semilinear_heat;
  if (name == "surface_diffusion") return sts::Problem::surface_diffusion;
  throw sts::InvalidArgument("unknown problem '" + name + "'");
}

// Report JSON text plus the diagnostics series as column lists.
py::tuple run_text(const std::string& text, const std::string& output_dir) {
  sts::RunConfig cfg = sts::parse_config(text);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  sts::RunReport r;
  {
    py::gil_scoped_release release;
    r = sts::run(cfg);
  }
  py::dict series;
  std::vector<double> t, v, hw, dv, cone, tte;
  std::vector<int> lev;
  for (const auto& row : r.series) {
    t.push_back(row.time);
    v.push_back(row.value);
    hw.push_back(row.half_width);
    dv.push_back(row.dvdt);
    cone.push_back(row.cone_slope);
    lev.push_back(row.level);
    tte.push_back(row.time_to_end);
  }
  series["time"] = t;
  series["value"] = v;
  series["half_width"] = hw;
  series["dvdt"] = dv;
  series["cone_slope"] = cone;
  series["level"] = lev;
  series["time_to_end"] = tte;
  return py::make_tuple(sts::report_json(r).dump(), series);
}

std::string certificate_text(const std::string& family, int s, const std::vector<std::string>& samples) {
  std::vector<mpq_class> xs;
  for (const auto& x : samples) {
    mpq_class q;
    if (q.set_str(x, 10) != 0) throw sts::InvalidArgument("bad rational '" + x + "'");
    q.canonicalize();
    xs.push_back(q);
  }
  if (xs.empty()) xs = sts::monotone::default_samples();
  return sts::certificate_json(sts::monotone::verify_monotone(sts::parse_family(family), s, xs)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Super-time-stepping core";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<sts::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<sts::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<sts::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("default_config_text",
        [](const std::string& problem) { return sts::format_config(sts::default_config(parse_problem(problem))); },
        py::arg("problem"));
  m.def("normalize_config_text", [](const std::string& text) { return sts::format_config(sts::parse_config(text)); },
        py::arg("text"));
  m.def("run_text", &run_text, py::arg("text"), py::arg("output_dir") = "");
  m.def("certificate_text", &certificate_text, py::arg("family"), py::arg("s"),
        py::arg("samples") = std::vector<std::string>{});
  m.def(
      "stability_polynomial",
      [](const std::string& family, int s, double z) {
        return sts::stability_polynomial_value(sts::SchemeSpec(sts::parse_family(family), s), z);
      },
      py::arg("family"), py::arg("s"), py::arg("z"));
  m.def(
      "stability_cfl_limit",
      [](const std::string& family, int s) { return sts::stability_cfl_limit(sts::parse_family(family), s); },
      py::arg("family"), py::arg("s"));
  m.def(
      "heat_convergence",
      [](const std::string& family, int s) {
        const sts::ConvergenceStudy st = sts::heat_convergence(sts::parse_family(family), s);
        std::vector<std::pair<double, double>> rows;
        for (const auto& r : st.rows) rows.emplace_back(r.dt, r.error);
        return py::make_tuple(rows, st.order);
      },
      py::arg("family"), py::arg("s"));
  m.def("collapse_reference", &sts::collapse_reference, py::arg("eta"), py::arg("p"));
  m.def("residual_blowup_time", &sts::residual_blowup_time, py::arg("u"), py::arg("p"));
  m.attr("CONE_SLOPE") = sts::kConeSlope;
  m.attr("PINCH_RATE_CONSTANT") = sts::kPinchRateConstant;
}
