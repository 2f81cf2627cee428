#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "gsav/errors.hpp"
#include "gsav/harness.hpp"
#include "gsav/model.hpp"
#include "gsav/schemes.hpp"
#include "gsav/verify.hpp"

namespace py = pybind11;
using namespace gsav;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Boundary boundary_from(const std::string& b) {
  if (b == "periodic") return Boundary::periodic;
  if (b == "neumann") return Boundary::neumann;
  throw ContractViolation("unknown boundary '" + b + "'");
}

Array to_numpy(const GridFunction& v) {
  const auto m = static_cast<py::ssize_t>(v.points());
  Array out({m, m});
  std::memcpy(out.mutable_data(), v.values().data(), v.size() * sizeof(double));
  return out;
}

GridFunction from_numpy(const GridSpec& spec, const Array& a) {
  const auto m = static_cast<py::ssize_t>(spec.points());
  if (a.ndim() != 2 || a.shape(0) != m || a.shape(1) != m)
    throw ContractViolation("expected an array of shape (" + std::to_string(m) + ", " +
                            std::to_string(m) + ")");
  return GridFunction(spec, std::vector<double>(a.data(), a.data() + a.size()));
}

Sigma sigma_from(const std::string& kind, double a) {
  if (kind == "const") return Sigma::constant(a);
  if (kind == "exp") return Sigma::exp(a);
  if (kind == "arctan") return Sigma::arctan_shift();
  if (kind == "tanh") return Sigma::tanh_shift();
  throw ContractViolation("unknown sigma '" + kind + "'");
}

// Columns of the diagnostics table as numpy arrays.
py::dict columns(const std::vector<DiagnosticsRow>& rows) {
  const auto n = static_cast<py::ssize_t>(rows.size());
  py::array_t<long> step(n);
  Array t(n), tau(n), sup(n), e(n), me(n), s(n), g(n);
  for (py::ssize_t k = 0; k < n; ++k) {
    const DiagnosticsRow& r = rows[static_cast<std::size_t>(k)];
    step.mutable_at(k) = r.step;
    t.mutable_at(k) = r.t;
    tau.mutable_at(k) = r.tau;
    sup.mutable_at(k) = r.sup_norm;
    e.mutable_at(k) = r.energy;
    me.mutable_at(k) = r.modified_energy;
    s.mutable_at(k) = r.s;
    g.mutable_at(k) = r.g;
  }
  py::dict d;
  d["step"] = step;
  d["t"] = t;
  d["tau"] = tau;
  d["sup_norm"] = sup;
  d["energy"] = e;
  d["modified_energy"] = me;
  d["s"] = s;
  d["g"] = g;
  return d;
}

py::dict check_dict(const CheckResult& c) {
  py::dict d;
  d["name"] = c.name;
  d["passed"] = c.passed;
  d["detail"] = c.detail;
  d["worst"] = c.worst;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gsav, m) {
  m.doc() = "GSAV exponential integrators for Allen-Cahn flows on uniform 2D grids.";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_AssertionError);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double length, int points, const std::string& boundary) {
             return GridSpec(length, points, boundary_from(boundary));
           }),
           py::arg("length") = 1.0, py::arg("points") = 128, py::arg("boundary") = "periodic")
      .def_property_readonly("length", &GridSpec::length)
      .def_property_readonly("points", &GridSpec::points)
      .def_property_readonly("h", &GridSpec::h)
      .def_property_readonly("boundary", [](const GridSpec& g) { return to_string(g.boundary()); })
      .def("coordinates", [](const GridSpec& g) {
        Array x(g.points());
        for (int i = 0; i < g.points(); ++i) x.mutable_at(i) = g.coordinate(i);
        return x;
      })
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(length=" + format_real(g.length()) + ", points=" +
               std::to_string(g.points()) + ", boundary='" + to_string(g.boundary()) + "')";
      });

  py::class_<Potential>(m, "Potential")
      .def_static("double_well", &Potential::double_well)
      .def_static("flory_huggins", &Potential::flory_huggins, py::arg("theta") = 0.8,
                  py::arg("theta_c") = 1.6)
      .def_property_readonly("beta", &Potential::beta)
      .def_property_readonly("lipschitz", &Potential::lipschitz)
      .def_property_readonly("name", &Potential::name)
      .def("f", [](const Potential& p, const py::object& u) {
        return py::vectorize([&p](double x) { return p.f(x); })(u);
      })
      .def("F", [](const Potential& p, const py::object& u) {
        return py::vectorize([&p](double x) { return p.F(x); })(u);
      })
      .def("df", [](const Potential& p, const py::object& u) {
        return py::vectorize([&p](double x) { return p.df(x); })(u);
      });

  py::class_<Sigma>(m, "Sigma")
      .def(py::init(&sigma_from), py::arg("kind") = "exp", py::arg("a") = 1.0)
      .def_property_readonly("name", &Sigma::name)
      .def("value", &Sigma::value)
      .def("log_value", &Sigma::log_value);

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init([](const Potential& p, const Sigma& s, const std::string& scheme, double eps,
                       std::optional<double> kappa) {
             SchemeConfig cfg = SchemeConfig::make(p, s, scheme_from_string(scheme), eps);
             if (kappa) cfg.kappa = *kappa;
             return cfg;
           }),
           py::arg("potential") = Potential::double_well(), py::arg("sigma") = Sigma::exp(1.0),
           py::arg("scheme") = "ei2", py::arg("eps") = 0.01, py::arg("kappa") = py::none())
      .def_readwrite("eps", &SchemeConfig::eps)
      .def_readwrite("kappa", &SchemeConfig::kappa)
      .def_readonly("potential", &SchemeConfig::potential)
      .def_readonly("sigma", &SchemeConfig::sigma)
      .def_property_readonly("scheme", [](const SchemeConfig& c) { return to_string(c.scheme); });

  py::class_<SolverState>(m, "SolverState")
      .def_static(
          "initial",
          [](const Potential& p, const GridSpec& spec, const Array& u) {
            return SolverState::initial(p, from_numpy(spec, u));
          },
          py::arg("potential"), py::arg("grid"), py::arg("u"))
      .def_property_readonly("u", [](const SolverState& s) { return to_numpy(s.u); })
      .def_property_readonly("grid", [](const SolverState& s) { return s.u.spec(); })
      .def_readonly("s", &SolverState::s)
      .def_readonly("t", &SolverState::t)
      .def_readonly("step", &SolverState::step);

  m.def("step", &step, py::arg("cfg"), py::arg("state"), py::arg("tau"),
        "Advance one step with the scheme selected in cfg.");
  m.def("reference_solution",
        [](const SchemeConfig& cfg, const GridSpec& spec, const Array& u0, double t_end,
           double tau_ref) {
          return reference_solution(cfg, from_numpy(spec, u0), t_end, tau_ref);
        },
        py::arg("cfg"), py::arg("grid"), py::arg("u0"), py::arg("t_end"), py::arg("tau_ref"));

  m.def("init_sine", [](const GridSpec& g, double a) { return to_numpy(init_sine(g, a)); },
        py::arg("grid"), py::arg("amplitude") = 0.1);
  m.def("init_random",
        [](const GridSpec& g, double lo, double hi, std::uint64_t seed) {
          return to_numpy(init_random(g, lo, hi, seed));
        },
        py::arg("grid"), py::arg("lo") = -0.8, py::arg("hi") = 0.8, py::arg("seed") = 0);

  m.def("total_energy",
        [](const Potential& p, double eps, const GridSpec& g, const Array& u) {
          return total_energy(p, eps, from_numpy(g, u));
        },
        py::arg("potential"), py::arg("eps"), py::arg("grid"), py::arg("u"));
  m.def("modified_energy",
        [](double eps, const GridSpec& g, const Array& u, double r) {
          return modified_energy(eps, from_numpy(g, u), r);
        },
        py::arg("eps"), py::arg("grid"), py::arg("u"), py::arg("s"));
  m.def("laplacian",
        [](const GridSpec& g, const Array& u) { return to_numpy(laplacian(from_numpy(g, u))); },
        py::arg("grid"), py::arg("u"));

  auto make_run_config = [](const GridSpec& grid, const SchemeConfig& cfg, double t_end,
                            std::optional<double> tau, bool adaptive, double tau_min,
                            double tau_max, double alpha, const std::string& init,
                            double amplitude, double lo, double hi, std::uint64_t seed,
                            const std::string& out, long snapshot_every, bool check_invariants) {
    RunConfig rc;
    rc.grid = grid;
    rc.scheme = cfg;
    rc.t_end = t_end;
    if (adaptive)
      rc.stepping = AdaptiveStep{tau_min, tau_max, alpha};
    else
      rc.stepping = UniformStep{tau.value_or(0.01)};
    if (init == "sine")
      rc.init = SineInit{amplitude};
    else if (init == "random")
      rc.init = RandomInit{lo, hi, seed};
    else
      throw ContractViolation("unknown init '" + init + "'");
    rc.output = out;
    rc.snapshot_every = snapshot_every;
    rc.check_invariants = check_invariants;
    rc.validate();
    return rc;
  };

  m.def(
      "run",
      [make_run_config](const GridSpec& grid, const SchemeConfig& cfg, double t_end,
                        std::optional<double> tau, bool adaptive, double tau_min, double tau_max,
                        double alpha, const std::string& init, double amplitude, double lo,
                        double hi, std::uint64_t seed, const std::string& out,
                        long snapshot_every, bool check_invariants) {
        const RunConfig rc =
            make_run_config(grid, cfg, t_end, tau, adaptive, tau_min, tau_max, alpha, init,
                            amplitude, lo, hi, seed, out, snapshot_every, check_invariants);
        std::optional<RunResult> r;
        {
          py::gil_scoped_release nogil;
          r.emplace(run(rc));
        }
        py::dict d = columns(r->rows);
        d["u"] = to_numpy(r->final_state.u);
        return d;
      },
      py::arg("grid"), py::arg("cfg"), py::arg("t_end") = 1.0, py::arg("tau") = py::none(),
      py::arg("adaptive") = false, py::arg("tau_min") = 1e-4, py::arg("tau_max") = 0.1,
      py::arg("alpha") = 1e5, py::arg("init") = "sine", py::arg("amplitude") = 0.1,
      py::arg("lo") = -0.8, py::arg("hi") = 0.8, py::arg("seed") = 0, py::arg("out") = "",
      py::arg("snapshot_every") = 0, py::arg("check_invariants") = false,
      "Integrate one trajectory. Returns the diagnostics columns and the final field 'u'.");

  m.def(
      "converge",
      [](const GridSpec& grid, const SchemeConfig& cfg, double t_end, std::vector<double> taus,
         double tau_ref, double amplitude) {
        RunConfig rc;
        rc.grid = grid;
        rc.scheme = cfg;
        rc.t_end = t_end;
        rc.init = SineInit{amplitude};
        ConvergenceResult r;
        {
          py::gil_scoped_release nogil;
          r = converge(rc, taus, tau_ref);
        }
        Array tau(static_cast<py::ssize_t>(r.rows.size())), l2(tau.size()), li(tau.size());
        for (std::size_t k = 0; k < r.rows.size(); ++k) {
          tau.mutable_at(k) = r.rows[k].tau;
          l2.mutable_at(k) = r.rows[k].l2_error;
          li.mutable_at(k) = r.rows[k].inf_error;
        }
        py::dict d;
        d["tau"] = tau;
        d["l2_error"] = l2;
        d["inf_error"] = li;
        d["slope"] = r.slope;
        return d;
      },
      py::arg("grid"), py::arg("cfg"), py::arg("t_end"), py::arg("taus"), py::arg("tau_ref"),
      py::arg("amplitude") = 0.1);

  m.def(
      "verify",
      [](const std::vector<std::string>& names, std::uint64_t seed) {
        std::vector<VerifyProfile> profiles;
        for (const auto& n : names) profiles.push_back(profile_from_string(n));
        VerifyOptions opts;
        opts.seed = seed;
        VerifyReport rep;
        {
          py::gil_scoped_release nogil;
          rep = verify(profiles, opts);
        }
        py::list checks;
        for (const auto& c : rep.checks) checks.append(check_dict(c));
        py::dict d;
        d["passed"] = rep.passed();
        d["checks"] = checks;
        return d;
      },
      py::arg("profiles") = std::vector<std::string>{"lemmas", "invariants", "oracles"},
      py::arg("seed") = 20240611);

  m.attr("DIAGNOSTICS_HEADER") = kDiagnosticsHeader;
}
