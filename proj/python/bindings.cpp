#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "antiplane/analysis.hpp"
#include "antiplane/greens.hpp"
#include "antiplane/report.hpp"

namespace py = pybind11;
using namespace antiplane;

namespace {

// Round-trips through the JSON schema used by the command-line reports.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

PredictorSpec make_spec(double k, int order, std::optional<double> c2, bool validate = true) {
  PredictorSpec s;
  s.k = k;
  s.order = order;
  s.c2 = c2;
  if (validate) s.validate();
  return s;
}

SolveSettings make_settings(double tol) {
  SolveSettings s;
  s.tol_linf = tol;
  s.validate();
  return s;
}

py::array_t<int> site_array(const LatticeDomain& d, bool interior_only) {
  const std::size_t n = interior_only ? d.num_interior() : d.size();
  py::array_t<int> out({n, std::size_t{2}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i) {
    v(i, 0) = d.site(static_cast<int>(i)).a;
    v(i, 1) = d.site(static_cast<int>(i)).b;
  }
  return out;
}

py::array_t<double> values(const ScalarField& f) {
  const auto s = f.interior();
  return py::array_t<double>(static_cast<py::ssize_t>(s.size()), s.data());
}

py::dict solve(double radius, double k, int order, std::optional<double> c2, const std::string& potential,
               double tol) {
  const auto d = LatticeDomain::create(radius);
  const auto pot = PairPotential::from_name(potential);
  const auto spec = make_spec(k, order, c2);
  const auto settings = make_settings(tol);
  CorrectorRun run = [&] {
    py::gil_scoped_release release;
    return solve_corrector(d, spec, pot, settings);
  }();
  const RunDecay dec = decay_of_run(run, pot, DecayWindow::for_radius(radius));
  py::dict out;
  out["sites"] = site_array(*d, true);
  out["predictor"] = values(run.predictor);
  out["corrector"] = values(run.corrector);
  out["report"] = to_py(nlohmann::json(run.report));
  out["meta"] = to_py(nlohmann::json(make_meta(radius, spec, pot, settings)));
  out["corrector_gradient"] = to_py(nlohmann::json(dec.corrector_gradient));
  out["forces"] = to_py(nlohmann::json(dec.forces));
  out["linear_residual"] = to_py(nlohmann::json(dec.linear_residual));
  return out;
}

py::dict calibrate(double radius, double k, const std::string& potential, double tol) {
  const auto d = LatticeDomain::create(radius);
  const auto pot = PairPotential::from_name(potential);
  const auto spec = make_spec(k, 2, std::nullopt, false);
  const auto settings = make_settings(tol);
  py::gil_scoped_release release;
  const C2Calibration c = calibrate_c2(d, spec, pot, settings);
  py::gil_scoped_acquire acquire;
  return to_py(nlohmann::json(c));
}

py::dict converge(std::vector<double> radii, double k, int order, std::optional<double> c2,
                  const std::string& potential, double tol) {
  const auto pot = PairPotential::from_name(potential);
  const auto spec = make_spec(k, order, c2);
  const auto settings = make_settings(tol);
  py::gil_scoped_release release;
  const ConvergenceReport r = convergence_study(std::move(radii), spec, pot, settings);
  py::gil_scoped_acquire acquire;
  return to_py(nlohmann::json(r));
}

py::dict green_column(double radius, std::pair<int, int> source, bool mu, const std::string& boundary) {
  if (boundary != "symmetric" && boundary != "hat0") throw std::invalid_argument("boundary must be symmetric or hat0");
  const auto d = LatticeDomain::create(radius);
  const CrackGreenSolver solver(d, boundary == "symmetric" ? GreenBoundary::kSymmetric : GreenBoundary::kHat0);
  const GreensColumn c = solver.column({source.first, source.second},
                                       mu ? CutoffProfile::quintic() : CutoffProfile::zero());
  py::dict out;
  out["sites"] = site_array(*d, true);
  out["full"] = values(c.full);
  out["hat0"] = values(c.hat0);
  out["hat1_mu"] = values(c.hat1_mu);
  out["remainder"] = values(c.remainder);
  out["residual_linf"] = c.residual_linf;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anti-plane lattice crack lab";
  m.attr("__version__") = version();

  m.def("g_hom_diff", &g_hom_diff, py::arg("m1"), py::arg("m2"),
        "Homogeneous lattice Green's function difference G(0) - G(m).");
  m.def(
      "g_hat0", [](std::pair<int, int> m, std::pair<int, int> s) { return g_hat0({m.first, m.second}, {s.first, s.second}); },
      py::arg("m"), py::arg("s"), "Continuum crack Green's function predictor at lattice sites m != s.");
  m.def(
      "g_hat1_s", [](double x1, double x2) { return g_hat1_s(Point{x1, x2}); }, py::arg("x1"), py::arg("x2"),
      "Source factor of the discrete geometry predictor.");
  m.def(
      "predictor", [](double x1, double x2, double k, int order, std::optional<double> c2) {
        return predictor_value({x1, x2}, make_spec(k, order, c2));
      },
      py::arg("x1"), py::arg("x2"), py::arg("k") = 0.4, py::arg("order") = 0, py::arg("c2") = py::none());
  m.def(
      "sites_in_ball", [](double r) {
        const auto d = LatticeDomain::create(r);
        return site_array(*d, true);
      },
      py::arg("radius"), "Interior lattice sites (a, b) with |x| <= radius, sorted by radius.");

  m.def("solve", &solve, py::arg("radius"), py::arg("k") = 0.4, py::arg("order") = 0, py::arg("c2") = py::none(),
        py::arg("potential") = "gaussian", py::arg("tol") = 1e-8,
        "Solve for the corrector and return fields, solver report and decay reports.");
  m.def("calibrate_c2", &calibrate, py::arg("radius"), py::arg("k") = 0.4, py::arg("potential") = "gaussian",
        py::arg("tol") = 1e-8);
  m.def("convergence_study", &converge, py::arg("radii"), py::arg("k") = 0.4, py::arg("order") = 0,
        py::arg("c2") = py::none(), py::arg("potential") = "gaussian", py::arg("tol") = 1e-8,
        "Energy-norm convergence; the last radius is the reference.");
  m.def("green_column", &green_column, py::arg("radius"), py::arg("source"), py::arg("mu") = true,
        py::arg("boundary") = "symmetric", "Crack Green's function column and its decomposition.");
}
