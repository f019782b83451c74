#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crossdiff/config.hpp"
#include "crossdiff/equilibria.hpp"
#include "crossdiff/errors.hpp"
#include "crossdiff/metrics.hpp"
#include "crossdiff/ode.hpp"
#include "crossdiff/pde.hpp"
#include "crossdiff/stability.hpp"

namespace py = pybind11;
using namespace crossdiff;

namespace {

py::array_t<double> matrix_array(const Matrix3& m) {
  py::array_t<double> out({3, 3});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < 3; ++i)
    for (py::ssize_t j = 0; j < 3; ++j) r(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

// Field as a (ny, nx) array, row j holding y = j * dy.
py::array_t<double> field_array(const FieldGrid& g, Field f) {
  py::array_t<double> out({static_cast<py::ssize_t>(g.ny), static_cast<py::ssize_t>(g.nx)});
  std::copy(g.field(f).begin(), g.field(f).end(), out.mutable_data());
  return out;
}

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

KeyValues kv_from_dict(const py::dict& d) {
  KeyValues kv;
  for (const auto& item : d) {
    const auto key = py::str(item.first).cast<std::string>();
    py::object value = py::reinterpret_borrow<py::object>(item.second);
    std::string text;
    if (py::isinstance<py::bool_>(value))
      text = value.cast<bool>() ? "true" : "false";
    else if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
      for (const auto& x : value) text += (text.empty() ? "" : ",") + py::str(x).cast<std::string>();
    } else
      text = py::str(value).cast<std::string>();
    kv.emplace_back(key, text);
  }
  return kv;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cross-diffusion tumor-immune reaction-diffusion model";

  auto base = py::register_exception<Error>(m, "CrossdiffError", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<BracketError>(m, "BracketError", base.ptr());
  py::register_exception<BranchLostError>(m, "BranchLostError", base.ptr());
  py::register_exception<BlowUpError>(m, "BlowUpError", base.ptr());
  py::register_exception<NegativityError>(m, "NegativityError", base.ptr());

  py::class_<State>(m, "State")
      .def(py::init<>())
      .def(py::init([](double u, double v, double w) { return State{u, v, w}; }), py::arg("u"), py::arg("v"),
           py::arg("w"))
      .def_readwrite("u", &State::u)
      .def_readwrite("v", &State::v)
      .def_readwrite("w", &State::w)
      .def("to_tuple", [](const State& s) { return py::make_tuple(s.u, s.v, s.w); })
      .def("__iter__", [](const State& s) { return py::iter(py::make_tuple(s.u, s.v, s.w)); })
      .def("__repr__", [](const State& s) {
        return "State(" + std::to_string(s.u) + ", " + std::to_string(s.v) + ", " + std::to_string(s.w) + ")";
      });

  auto params = py::class_<ModelParams>(m, "ModelParams").def(py::init<>()).def("validate", &ModelParams::validate);
  for (const auto& [name, member] : kParamFields) params.def_readwrite(std::string(name).c_str(), member);
  params.def("to_dict", [](const ModelParams& p) {
    py::dict d;
    for (const auto& [name, member] : kParamFields) d[py::str(std::string(name))] = p.*member;
    return d;
  });
  params.def("replace", [](ModelParams p, const py::kwargs& kw) {
    for (const auto& item : kw) {
      const auto key = py::str(item.first).cast<std::string>();
      const auto field = param_field(key);
      if (!field) throw ArgumentError("unknown parameter '" + key + "'");
      p.*(*field) = item.second.cast<double>();
    }
    return p;
  });

  m.def("preset", [](const std::string& name) { return preset(name); }, py::arg("name"));
  m.def("reaction_rhs", &reaction_rhs, py::arg("params"), py::arg("state"));
  m.def("jacobian", [](const ModelParams& p, const State& s) { return matrix_array(jacobian(p, s)); },
        py::arg("params"), py::arg("state"));

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_property_readonly("kind", [](const Equilibrium& e) { return std::string(to_string(e.kind)); })
      .def_readonly("state", &Equilibrium::state)
      .def_property_readonly("eigenvalues",
                             [](const Equilibrium& e) { return std::vector<std::complex<double>>(e.eigenvalues.begin(), e.eigenvalues.end()); })
      .def_property_readonly("stability", [](const Equilibrium& e) { return std::string(to_string(e.stability)); });

  m.def("cfe", &cfe, py::arg("params"));
  m.def("cce_solve", &cce_solve, py::arg("params"));
  m.def("classify", &classify, py::arg("params"), py::arg("state"));
  m.def("quintic_coeffs",
        [](const ModelParams& p) {
          const auto q = quintic_coeffs(p);
          return std::vector<double>(q.a.begin(), q.a.end());
        },
        py::arg("params"));
  m.def("existence_region",
        [](const ModelParams& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& p2,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& c, bool treated) {
          const auto g = existence_region_scan(p, as_vector(p2), as_vector(c),
                                               treated ? Scenario::Treated : Scenario::Untreated);
          py::array_t<bool> out({static_cast<py::ssize_t>(g.p2.size()), static_cast<py::ssize_t>(g.c.size())});
          std::copy(g.exists.begin(), g.exists.end(), out.mutable_data());
          return out;
        },
        py::arg("params"), py::arg("p2"), py::arg("c"), py::arg("treated") = false);

  py::class_<HopfResult>(m, "HopfResult")
      .def_readonly("p2_critical", &HopfResult::p2_critical)
      .def_readonly("eigenvalue", &HopfResult::eigenvalue)
      .def_readonly("bracket", &HopfResult::bracket)
      .def_readonly("equilibrium", &HopfResult::equilibrium);
  m.def("hopf_scan", &hopf_scan, py::arg("params"), py::arg("p2_lo"), py::arg("p2_hi"), py::arg("tol") = 1e-4);

  m.def("dispersion_relation",
        [](const ModelParams& p, const State& e, std::optional<std::vector<double>> k) {
          const auto ks = k ? *k : default_k_grid();
          const auto d = dispersion_relation(p, e, ks);
          std::vector<double> growth, freq;
          for (const auto& pt : d.points) {
            growth.push_back(pt.growth);
            freq.push_back(pt.frequency);
          }
          py::dict out;
          out["k"] = py::array_t<double>(static_cast<py::ssize_t>(ks.size()), ks.data());
          out["growth"] = py::array_t<double>(static_cast<py::ssize_t>(growth.size()), growth.data());
          out["frequency"] = py::array_t<double>(static_cast<py::ssize_t>(freq.size()), freq.data());
          out["k_max"] = d.k_max;
          out["growth_max"] = d.growth_max;
          return out;
        },
        py::arg("params"), py::arg("equilibrium"), py::arg("k") = py::none());
  m.def("critical_d32",
        [](const ModelParams& p, const State& e, double lo, double hi, double tol) {
          const auto ks = default_k_grid();
          return critical_d32(p, e, lo, hi, ks, tol);
        },
        py::arg("params"), py::arg("equilibrium"), py::arg("d32_lo") = -3.0, py::arg("d32_hi") = 0.0,
        py::arg("tol") = 1e-3);

  m.def("integrate",
        [](const ModelParams& p, const State& u0, double t_end, double dt, std::size_t record_every) {
          const auto tr = integrate(p, u0, t_end, dt, record_every);
          py::array_t<double> t(static_cast<py::ssize_t>(tr.size()), tr.t.data());
          py::array_t<double> x({static_cast<py::ssize_t>(tr.size()), py::ssize_t{3}});
          auto r = x.mutable_unchecked<2>();
          for (std::size_t i = 0; i < tr.size(); ++i)
            for (std::size_t c = 0; c < 3; ++c) r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(c)) = tr.x[i][c];
          return py::make_tuple(t, x);
        },
        py::arg("params"), py::arg("u0"), py::arg("t_end"), py::arg("dt") = 1e-3, py::arg("record_every") = 1);
  m.def("cycle_metrics",
        [](const ModelParams& p, const State& u0, double t_end, double dt, std::size_t record_every,
           double transient) -> py::object {
          const auto cm = cycle_metrics(integrate(p, u0, t_end, dt, record_every), transient);
          if (!cm) return py::none();
          py::dict d;
          d["period"] = cm->period;
          d["amplitude"] = cm->amplitude;
          d["mean"] = cm->mean;
          return d;
        },
        py::arg("params"), py::arg("u0"), py::arg("t_end"), py::arg("dt") = 1e-3, py::arg("record_every") = 10,
        py::arg("transient_fraction") = 0.5);

  py::class_<Snapshot>(m, "Snapshot")
      .def_readonly("time", &Snapshot::time)
      .def_property_readonly("u", [](const Snapshot& s) { return field_array(s.grid, Field::U); })
      .def_property_readonly("v", [](const Snapshot& s) { return field_array(s.grid, Field::V); })
      .def_property_readonly("w", [](const Snapshot& s) { return field_array(s.grid, Field::W); })
      .def_property_readonly("shape", [](const Snapshot& s) { return py::make_tuple(s.grid.ny, s.grid.nx); })
      .def_property_readonly("variance", [](const Snapshot& s) {
        return py::make_tuple(s.stats[0].variance, s.stats[1].variance, s.stats[2].variance);
      });

  m.def("simulate",
        [](const py::dict& settings) {
          const RunConfig cfg = resolve_run_config({}, kv_from_dict(settings));
          SimConfig sim = cfg.sim_config();
          if (cfg.ic_equilibrium) {
            const auto roots = cce_solve(cfg.params);
            if (roots.empty()) throw ArgumentError("no coexistence equilibrium for ic = equilibrium");
            sim.uniform_state = roots.back().state;
          }
          SimulationResult res;
          {
            py::gil_scoped_release release;
            res = simulate(sim);
          }
          return res.snapshots;
        },
        py::arg("settings"),
        "Run the solver; `settings` uses the config-file keys (scenario, parameters, dims, dx, dt, t_end, ...).");
  m.def("stationarity", &stationarity, py::arg("a"), py::arg("b"));
  m.def("pattern_class",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& field) {
          if (field.ndim() != 2) throw ArgumentError("pattern_class expects a 2D array");
          const auto ny = static_cast<std::size_t>(field.shape(0));
          const auto nx = static_cast<std::size_t>(field.shape(1));
          return std::string(to_string(pattern_class(as_vector(field), nx, ny)));
        },
        py::arg("field"));
  m.def("pattern_report",
        [](const std::vector<Snapshot>& snaps, double x, double y) { return to_key_value(pattern_report(snaps, x, y)); },
        py::arg("snapshots"), py::arg("probe_x") = 0.5, py::arg("probe_y") = 0.5);

  m.attr("__version__") = CROSSDIFF_VERSION;
}
