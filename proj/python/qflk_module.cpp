#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qflk/certify.hpp"
#include "qflk/recipes.hpp"
#include "qflk/sl_oracle.hpp"
#include "qflk/solver.hpp"
#include "qflk/spectral.hpp"

namespace py = pybind11;
using namespace qflk;

namespace {

TorusGrid grid_of(const py::array& a) {
  int dim = static_cast<int>(a.ndim());
  int n = static_cast<int>(a.shape(0));
  for (int i = 1; i < dim; ++i)
    if (a.shape(i) != n) throw ConfigError("expected a cubic array");
  return TorusGrid(dim, n);
}

ScalarField to_field(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  TorusGrid g = grid_of(a);
  ScalarField f(g);
  std::copy(a.data(), a.data() + g.num_points(), f.values().begin());
  return f;
}

py::array_t<double> from_field(const ScalarField& f) {
  const TorusGrid& g = f.grid();
  std::vector<py::ssize_t> shape(g.dim(), g.n());
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Params params_from(const py::dict& d) {
  Params p;
  for (auto item : d) {
    std::string k = py::cast<std::string>(item.first);
    double v = py::cast<double>(item.second);
    if (k == "lambda") p.lambda = v;
    else if (k == "mu") p.mu = v;
    else if (k == "hbar") p.hbar = v;
    else if (k == "nu") p.nu = v;
    else if (k == "delta1") p.delta1 = v;
    else if (k == "delta2") p.delta2 = v;
    else if (k == "eta1") p.eta1 = v;
    else if (k == "eta2") p.eta2 = v;
    else if (k == "r0") p.r0 = v;
    else if (k == "r1") p.r1 = v;
    else if (k == "alpha") p.alpha = v;
    else if (k == "s") p.s = static_cast<int>(v);
    else if (k == "density_floor") p.density_floor = v;
    else throw ConfigError("unknown parameter: " + k);
  }
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_qflk, m) {
  m.doc() = "pseudo-spectral quantum-fluid laboratory (python bindings)";

  py::register_exception<ConfigError>(m, "QflkConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "QflkNumericalError", PyExc_RuntimeError);

  m.def("gradient", [](py::array_t<double, py::array::c_style | py::array::forcecast> a, int axis) {
    return from_field(spectral::derivative(to_field(a), axis));
  }, py::arg("values"), py::arg("axis") = 0,
     "spectral d/dx_axis of a periodic sample array");

  m.def("laplacian", [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    return from_field(spectral::laplacian(to_field(a)));
  });

  m.def("dealias", [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    return from_field(spectral::dealias(to_field(a)));
  });

  m.def("integrate", [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    return spectral::integrate(to_field(a));
  });

  m.def("energy", [](py::array_t<double, py::array::c_style | py::array::forcecast> rho,
                     std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>> u,
                     py::dict params) {
    ScalarField r = to_field(rho);
    VectorField v(r.grid());
    if (static_cast<int>(u.size()) != r.grid().dim())
      throw ConfigError("velocity component count must match dim");
    for (int a = 0; a < r.grid().dim(); ++a) v[a] = to_field(u[a]);
    Params p = params_from(params);
    auto e = functionals::energy_nslk(FluidState(r, v), p);
    return py::make_tuple(e.value, e.dissipation);
  }, py::arg("rho"), py::arg("u"), py::arg("params"),
     "(energy, dissipation) of a density/velocity pair");

  m.def("bohm_ratio", [](py::array_t<double, py::array::c_style | py::array::forcecast> rho,
                         py::dict params) {
    return functionals::bohm_inequality_ratio(to_field(rho), params_from(params));
  });

  m.def("make_initial", [](const std::string& name, std::map<std::string, double> opts, int dim,
                           int n, py::dict params, std::uint64_t seed) {
    TorusGrid g(dim, n);
    Params p = params_from(params);
    FluidState s = recipes::make_fluid(name, opts, g, p, seed);
    py::list u;
    for (int a = 0; a < dim; ++a) u.append(from_field(s.u[a]));
    return py::make_tuple(from_field(s.rho), u);
  }, py::arg("name"), py::arg("opts"), py::arg("dim"), py::arg("n"), py::arg("params"),
     py::arg("seed") = 0);

  m.def("run_fluid", [](py::array_t<double, py::array::c_style | py::array::forcecast> rho,
                        std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>> u,
                        py::dict params, double dt, double t_end, const std::string& scheme) {
    ScalarField r = to_field(rho);
    VectorField v(r.grid());
    for (int a = 0; a < r.grid().dim(); ++a) v[a] = to_field(u[a]);
    Params p = params_from(params);
    solver::SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.scheme = (scheme == "imex_cn") ? solver::Scheme::imex_cn : solver::Scheme::rk4;
    FluidState state(r, v);
    solver::RunResult rr = solver::run_reg(state, p, cfg);
    py::list uo;
    for (int a = 0; a < r.grid().dim(); ++a) uo.append(from_field(state.u[a]));
    py::list masses;
    for (const auto& rep : rr.reports) masses.append(rep.mass);
    return py::dict(py::arg("rho") = from_field(state.rho), py::arg("u") = uo,
                    py::arg("status") = rr.status, py::arg("mass") = masses);
  }, py::arg("rho"), py::arg("u"), py::arg("params"), py::arg("dt"), py::arg("t_end"),
     py::arg("scheme") = "rk4");

  m.def("run_wave", [](py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> psi,
                       py::dict params, double dt, double t_end) {
    TorusGrid g = grid_of(psi);
    WaveFunction w(g);
    std::copy(psi.data(), psi.data() + g.num_points(), w.psi.begin());
    Params p = params_from(params);
    sl::SLRunResult res = sl::run(w, p, dt, t_end);
    std::vector<py::ssize_t> shape(g.dim(), g.n());
    py::array_t<std::complex<double>> out(shape);
    std::copy(res.final.psi.begin(), res.final.psi.end(), out.mutable_data());
    return out;
  }, py::arg("psi"), py::arg("params"), py::arg("dt"), py::arg("t_end"),
     "split-step evolution of the damped logarithmic Schrodinger equation");
}
