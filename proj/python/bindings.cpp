#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "corput/decay_fitter.hpp"
#include "corput/error.hpp"
#include "corput/hypothesis_checker.hpp"
#include "corput/osc_integrator.hpp"
#include "corput/report_json.hpp"
#include "corput/sublevel.hpp"

namespace py = pybind11;
using namespace corput;

namespace {

// reports already have a JSON form; reuse it instead of mirroring every struct
py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

IntegrationOptions integration_options(double tol, int sphere_resolution) {
  IntegrationOptions o;
  o.tol = tol;
  o.sphere_resolution = sphere_resolution;
  return o;
}

ParameterPoint point(const std::vector<double>& nu) { return ParameterPoint{nu}; }

py::dict integral_dict(const IntegralResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["error"] = r.error_estimate;
  d["panels"] = r.panels_used;
  d["method"] = std::string(to_string(r.method));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "oscillatory integrals and the multidimensional van der Corput bound";

  static py::exception<Error> error(m, "CorputError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("name", &ProblemInstance::name)
      .def_readonly("dim", &ProblemInstance::dim)
      .def_readonly("gamma", &ProblemInstance::gamma)
      .def_readonly("center", &ProblemInstance::center)
      .def_property_readonly("delta", [](const ProblemInstance& p) { return p.cutoff.delta; })
      .def_property_readonly("parameter_samples",
                             [](const ProblemInstance& p) {
                               std::vector<std::vector<double>> out;
                               for (const auto& nu : p.parameters_or_default()) out.push_back(nu.coords);
                               return out;
                             })
      .def("__repr__", [](const ProblemInstance& p) {
        return "<ProblemInstance " + p.name + " N=" + std::to_string(p.dim) + " gamma=" + std::to_string(p.gamma) +
               ">";
      });

  m.def("catalog_names", [] {
    std::vector<std::string> names;
    for (const auto& e : catalog_entries()) names.push_back(e.name);
    return names;
  });
  m.def(
      "catalog", [](const std::string& name, const ParamMap& params) { return catalog(name, params); },
      py::arg("name"), py::arg("params") = ParamMap{});

  m.def(
      "eval_phase",
      [](const ProblemInstance& p, const std::vector<double>& x, const std::vector<double>& nu) {
        return eval_phase(p, x, point(nu));
      },
      py::arg("instance"), py::arg("x"), py::arg("nu") = std::vector<double>{});
  m.def(
      "radial_derivative",
      [](const ProblemInstance& p, double rho, const std::vector<double>& omega, int order,
         const std::vector<double>& nu) {
        const auto e = radial_derivative(p, rho, Direction(omega), point(nu), order);
        return py::make_tuple(e.value, e.error);
      },
      py::arg("instance"), py::arg("rho"), py::arg("omega"), py::arg("m"), py::arg("nu") = std::vector<double>{});
  m.def(
      "taylor_coefficients",
      [](const ProblemInstance& p, const std::vector<double>& omega, const std::vector<double>& nu) {
        return to_py(to_json(taylor_coefficients(p, Direction(omega), point(nu))));
      },
      py::arg("instance"), py::arg("omega"), py::arg("nu") = std::vector<double>{});
  m.def(
      "sphere_grid",
      [](int dim, int resolution) {
        std::vector<std::pair<std::vector<double>, double>> out;
        for (const auto& n : sphere_grid(dim, resolution)) out.emplace_back(n.omega.vec(), n.weight);
        return out;
      },
      py::arg("dim"), py::arg("resolution"));

  m.def(
      "analyze", [](const ProblemInstance& p, double c_min) {
        CheckOptions o;
        o.c_min = c_min;
        return to_py(to_json(analyze(p, o)));
      },
      py::arg("instance"), py::arg("c_min") = 1e-3);

  m.def("theta_cutoff", &theta_cutoff, py::arg("s"));
  m.def(
      "integrate",
      [](const ProblemInstance& p, double lambda, const std::vector<double>& nu, const std::string& method,
         double tol, int sphere_resolution) {
        const auto o = integration_options(tol, sphere_resolution);
        py::gil_scoped_release release;
        IntegralResult r;
        if (method == "direct")
          r = integrate_direct(p, lambda, point(nu), o);
        else if (method == "radial")
          r = integrate_radial(p, lambda, point(nu), o);
        else if (method == "auto")
          r = integrate(p, lambda, point(nu), o);
        else
          throw Error(ErrorKind::invalid_argument, "method must be auto, direct or radial");
        py::gil_scoped_acquire acquire;
        return integral_dict(r);
      },
      py::arg("instance"), py::arg("lam"), py::arg("nu") = std::vector<double>{}, py::arg("method") = "auto",
      py::arg("tol") = 1e-10, py::arg("sphere_resolution") = 32);
  m.def(
      "split_I1_I2",
      [](const ProblemInstance& p, double lambda, const std::vector<double>& omega, const std::vector<double>& nu) {
        const auto s = split_I1_I2(p, lambda, Direction(omega), point(nu));
        return py::make_tuple(integral_dict(s.i1), integral_dict(s.i2));
      },
      py::arg("instance"), py::arg("lam"), py::arg("omega"), py::arg("nu") = std::vector<double>{});
  m.def(
      "ibp_evaluate_I2",
      [](const ProblemInstance& p, double lambda, const std::vector<double>& omega, std::optional<int> l,
         const std::vector<double>& nu) {
        return integral_dict(ibp_evaluate_I2(p, lambda, Direction(omega), point(nu), l));
      },
      py::arg("instance"), py::arg("lam"), py::arg("omega"), py::arg("l") = py::none(),
      py::arg("nu") = std::vector<double>{});
  m.def(
      "ibp_terms",
      [](int l) {
        Json out = Json::array();
        for (const auto& t : ibp_terms(l)) out.push_back(to_json(t));
        return to_py(out);
      },
      py::arg("l"));

  m.def(
      "lambda_sweep",
      [](const ProblemInstance& p, double lambda_min, double lambda_max, int ppd, double tol) {
        SweepResult s;
        {
          py::gil_scoped_release release;
          s = lambda_sweep(p, lambda_min, lambda_max, ppd, integration_options(tol, 32));
        }
        py::dict d;
        d["lambdas"] = s.lambdas;
        std::vector<std::vector<double>> nus;
        for (const auto& nu : s.nus) nus.push_back(nu.coords);
        d["nus"] = nus;
        d["magnitudes"] = s.magnitudes;
        d["errors"] = s.error_estimates;
        d["failure"] = s.failure;
        try {
          d["fit"] = to_py(to_json(fit_power_law(s)));
        } catch (const Error&) {
          d["fit"] = py::none();
        }
        d["certificate"] = to_py(to_json(certify_bound(s, p.dim, p.gamma)));
        return d;
      },
      py::arg("instance"), py::arg("lambda_min"), py::arg("lambda_max"), py::arg("points_per_decade") = 8,
      py::arg("tol") = 1e-10);
  m.def(
      "fit_power_law",
      [](const std::vector<double>& lambdas, const std::vector<double>& magnitudes, std::vector<double> errors,
         double tail_fraction) {
        if (errors.empty()) errors.assign(magnitudes.size(), 0.0);
        return to_py(to_json(fit_power_law(lambdas, magnitudes, errors, tail_fraction)));
      },
      py::arg("lambdas"), py::arg("magnitudes"), py::arg("errors") = std::vector<double>{},
      py::arg("tail_fraction") = 0.5);

  m.def(
      "sublevel_measure",
      [](const ProblemInstance& p, double t, const std::string& method, std::size_t samples, std::uint64_t seed) {
        SublevelOptions o;
        o.method = method == "grid" ? SublevelMethod::grid : SublevelMethod::monte_carlo;
        o.samples = samples;
        o.seed = seed;
        return to_py(to_json(sublevel_measure(p, t, o)));
      },
      py::arg("instance"), py::arg("t"), py::arg("method") = "grid", py::arg("samples") = 1000,
      py::arg("seed") = 0);
  m.def(
      "sublevel_fit",
      [](const ProblemInstance& p, const std::vector<double>& ts, const std::string& method, std::size_t samples,
         std::uint64_t seed) {
        SublevelOptions o;
        o.method = method == "grid" ? SublevelMethod::grid : SublevelMethod::monte_carlo;
        o.samples = samples;
        o.seed = seed;
        return to_py(to_json(sublevel_fit(p, ts, o)));
      },
      py::arg("instance"), py::arg("t_grid"), py::arg("method") = "grid", py::arg("samples") = 1000,
      py::arg("seed") = 0);
}
