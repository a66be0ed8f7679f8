#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "isoshock/config.hpp"
#include "isoshock/errors.hpp"
#include "isoshock/euler2d.hpp"
#include "isoshock/experiment.hpp"
#include "isoshock/functionals.hpp"
#include "isoshock/lifespan.hpp"
#include "isoshock/riemann.hpp"
#include "isoshock/testfn3d.hpp"

namespace py = pybind11;
using namespace isoshock;

namespace {

// Cell data as (ny, nx) arrays, row j at y = yc(j).
py::dict field_arrays(const ConservedField& f) {
  const Grid2D& g = f.grid();
  py::array_t<double> rho({g.ny, g.nx}), mx({g.ny, g.nx}), my({g.ny, g.nx}), tracer({g.ny, g.nx});
  auto r = rho.mutable_unchecked<2>();
  auto a = mx.mutable_unchecked<2>();
  auto b = my.mutable_unchecked<2>();
  auto c = tracer.mutable_unchecked<2>();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Conserved& q = f(i, j);
      r(j, i) = q.rho;
      a(j, i) = q.mx;
      b(j, i) = q.my;
      c(j, i) = q.tracer;
    }
  py::dict d;
  d["t"] = f.time();
  d["rho"] = rho;
  d["mx"] = mx;
  d["my"] = my;
  d["tracer"] = tracer;
  return d;
}

py::dict series_dict(const FunctionalSeries& s) {
  py::dict d;
  d["t"] = s.t;
  d["X"] = s.X;
  d["Y"] = s.Y;
  d["S"] = s.S;
  d["Z"] = s.Z;
  d["W"] = s.W;
  d["r1"] = s.r1;
  d["r2"] = s.r2;
  d["M"] = s.M;
  d["terminated_early"] = s.terminated_early;
  return d;
}

Mode parse_mode(const std::string& name) {
  if (name == "simulate") return Mode::simulate;
  if (name == "verify-identities" || name == "verify_identities") return Mode::verify_identities;
  if (name == "sweep") return Mode::sweep;
  if (name == "testfn") return Mode::testfn;
  throw py::value_error("unknown mode '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_isoshock, m) {
  m.doc() = "Plane-shock perturbation laboratory for 2-D isothermal Euler flow";
  m.attr("__version__") = "0.1.0";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<FrontDetectionError>(m, "FrontDetectionError", PyExc_RuntimeError);
  py::register_exception<BlowUpSuspected>(m, "BlowUpSuspected", PyExc_RuntimeError);
  py::register_exception<SweepError>(m, "SweepError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<GasState>(m, "GasState")
      .def(py::init([](double rho, double u, double v) { return GasState{rho, u, v}; }), py::arg("rho") = 1.0,
           py::arg("u") = 0.0, py::arg("v") = 0.0)
      .def_readwrite("rho", &GasState::rho)
      .def_readwrite("u", &GasState::u)
      .def_readwrite("v", &GasState::v)
      .def("__repr__", [](const GasState& s) {
        std::ostringstream os;
        os.precision(17);
        os << "GasState(rho=" << s.rho << ", u=" << s.u << ", v=" << s.v << ")";
        return os.str();
      });

  py::enum_<WaveKind>(m, "WaveKind")
      .value("none", WaveKind::none)
      .value("shock", WaveKind::shock)
      .value("rarefaction", WaveKind::rarefaction);

  py::class_<RiemannFan>(m, "RiemannFan")
      .def_readonly("left", &RiemannFan::left)
      .def_readonly("middle", &RiemannFan::middle)
      .def_readonly("right", &RiemannFan::right)
      .def_readonly("sigma_minus", &RiemannFan::sigma_minus)
      .def_readonly("sigma_plus", &RiemannFan::sigma_plus)
      .def_readonly("left_tail", &RiemannFan::left_tail)
      .def_readonly("right_tail", &RiemannFan::right_tail)
      .def_readonly("left_wave", &RiemannFan::left_wave)
      .def_readonly("right_wave", &RiemannFan::right_wave)
      .def_readonly("contact_speed", &RiemannFan::contact_speed)
      .def_readonly("iterations", &RiemannFan::iterations)
      .def_readonly("residual", &RiemannFan::residual)
      .def("sample", &sample_self_similar, py::arg("xi"));

  py::class_<EntropyReport>(m, "EntropyReport")
      .def_readonly("applicable", &EntropyReport::applicable)
      .def_readonly("admissible", &EntropyReport::admissible)
      .def_readonly("violations", &EntropyReport::violations);

  m.def("solve_middle_state", &solve_middle_state, py::arg("left"), py::arg("right"),
        py::arg("tol") = kDefaultRiemannTol);
  m.def("check_entropy", &check_entropy, py::arg("fan"));
  m.def("rh_residual", &rh_residual, py::arg("upstream"), py::arg("downstream"), py::arg("speed"));
  m.def("wave_curve_phi", &wave_curve_phi, py::arg("rho"), py::arg("rho0"));
  m.def("riemann_report", &riemann_report, py::arg("left"), py::arg("right"));

  py::class_<Grid2D>(m, "Grid2D")
      .def_static("symmetric", &Grid2D::symmetric, py::arg("nx"), py::arg("ny"), py::arg("lx"), py::arg("ly"))
      .def_readonly("nx", &Grid2D::nx)
      .def_readonly("ny", &Grid2D::ny)
      .def_readonly("xmin", &Grid2D::xmin)
      .def_readonly("xmax", &Grid2D::xmax)
      .def_readonly("ymin", &Grid2D::ymin)
      .def_readonly("ymax", &Grid2D::ymax)
      .def_property_readonly("dx", &Grid2D::dx)
      .def_property_readonly("dy", &Grid2D::dy);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &ExperimentConfig::epsilon)
      .def_readwrite("nx", &ExperimentConfig::nx)
      .def_readwrite("ny", &ExperimentConfig::ny)
      .def_readwrite("lx", &ExperimentConfig::lx)
      .def_readwrite("ly", &ExperimentConfig::ly)
      .def_readwrite("t_max", &ExperimentConfig::t_max)
      .def_readwrite("cfl", &ExperimentConfig::cfl)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def("validate", &ExperimentConfig::validate)
      .def("hash", [](const ExperimentConfig& c) { return config_hash(c); })
      .def("__str__", [](const ExperimentConfig& c) { return serialize_config(c); });
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<Simulation>(m, "Simulation")
      .def(py::init([](const ExperimentConfig& c) {
             c.validate();
             return std::make_unique<Simulation>(make_spec(c), make_grid(c), make_diagnostics_options(c).step);
           }),
           py::arg("config"))
      .def_property_readonly("time", &Simulation::time)
      .def_property_readonly("steps", &Simulation::steps)
      .def_property_readonly("grid", [](const Simulation& s) { return s.field().grid(); })
      .def("advance_to", &Simulation::advance_to, py::arg("t"), py::call_guard<py::gil_scoped_release>())
      .def("fields", [](const Simulation& s) { return field_arrays(s.field()); })
      .def("functionals", [](const Simulation& s) {
        py::dict d;
        d["X"] = compute_X_background(s.field(), s.background());
        d["Y"] = compute_Y(s.field());
        d["S"] = compute_S(s.field());
        return d;
      });

  m.def(
      "run",
      [](const ExperimentConfig& c) {
        c.validate();
        RunOutcome r;
        {
          py::gil_scoped_release release;
          r = run_with_diagnostics(make_spec(c), make_grid(c), make_diagnostics_options(c));
        }
        py::dict d = series_dict(r.series);
        d["h"] = r.h;
        d["steps"] = r.steps;
        d["support_max_violation"] = r.support_max_violation;
        d["breakdown"] = r.breakdown;
        return d;
      },
      py::arg("config"), "Run with functional diagnostics; returns the sampled series.");

  m.def(
      "run_mode",
      [](const ExperimentConfig& c, const std::string& mode) {
        std::ostringstream log;
        const int code = run_experiment(c, parse_mode(mode), log);
        return py::make_tuple(code, log.str());
      },
      py::arg("config"), py::arg("mode"), "Run a CLI mode; returns (exit code, log text).");

  py::class_<LifespanEstimate>(m, "LifespanEstimate")
      .def_readonly("blowup_time", &LifespanEstimate::blowup_time)
      .def_readonly("censored", &LifespanEstimate::censored)
      .def_property_readonly("method", [](const LifespanEstimate& e) { return std::string(to_string(e.method)); });
  m.def(
      "riccati_blowup_time",
      [](double C, double t0, double W0, int dimension) {
        return riccati_blowup_time(RiccatiParams{C, t0, W0, dimension});
      },
      py::arg("C"), py::arg("t0"), py::arg("W0"), py::arg("dimension"));
  m.def(
      "integrate_riccati",
      [](double C, double t0, double W0, int dimension, double horizon, double dt) {
        return integrate_riccati(RiccatiParams{C, t0, W0, dimension}, horizon, dt).estimate;
      },
      py::arg("C"), py::arg("t0"), py::arg("W0"), py::arg("dimension"), py::arg("horizon"), py::arg("dt"));

  m.def("eval_F", &eval_F, py::arg("r"));
  m.def("eval_dF", &eval_dF, py::arg("r"));
  m.def("eval_F_quadrature", &eval_F_quadrature, py::arg("r"), py::arg("nodes") = 0);
  m.def("eval_F_series", &eval_F_series, py::arg("r"));
}
