#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldspectra/jc.hpp"
#include "ldspectra/model.hpp"
#include "ldspectra/oracle.hpp"
#include "ldspectra/perturbation.hpp"
#include "ldspectra/validation.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ldspectra;

namespace {

py::dict check_dict(const CheckResult& c) {
  return py::dict("id"_a = c.id, "description"_a = c.description, "passed"_a = c.pass, "skipped"_a = c.skipped,
                  "detail"_a = c.detail, "seconds"_a = c.seconds);
}

AmplitudeSet to_amps(const std::map<std::pair<int, int>, Complex>& in) {
  AmplitudeSet out;
  for (const auto& [k, v] : in) out[BasisIndex{k.first, k.second}] = v;
  return out;
}

py::dict trajectory_dict(const Trajectory& t) {
  Matrix states(t.states.empty() ? 0 : t.states.front().size(), Index(t.states.size()));
  for (std::size_t i = 0; i < t.states.size(); ++i) states.col(Index(i)) = t.states[i];
  return py::dict("times"_a = t.times, "states"_a = states, "sz"_a = t.sz, "n_mean"_a = t.n_mean,
                  "norm"_a = t.norm, "rhs_evaluations"_a = t.rhs_evaluations);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lamb-Dicke trapped-ion spectra, perturbation theory and dynamics";

  auto base = py::register_exception<Error>(m, "LdspectraError", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<SmallDenominator>(m, "SmallDenominator", base.ptr());
  py::register_exception<ResonanceRequired>(m, "ResonanceRequired", base.ptr());
  py::register_exception<NotHermitian>(m, "NotHermitian", base.ptr());
  py::register_exception<StepFailure>(m, "StepFailure", base.ptr());
  py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());
  py::register_exception<SingularCharge>(m, "SingularCharge", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<FockTruncation>(m, "FockTruncation")
      .def(py::init<int, int>(), "n_max"_a, "n_guard"_a = kDefaultGuard)
      .def_property_readonly("n_max", &FockTruncation::n_max)
      .def_property_readonly("n_guard", &FockTruncation::n_guard)
      .def_property_readonly("dim", &FockTruncation::dim)
      .def_property_readonly("highest_guarded_level", &FockTruncation::highest_guarded_level);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double nu, double K, double delta, double epsilon, std::optional<double> omega_L) {
             ModelParams p{nu, delta, K, epsilon, omega_L};
             p.validate();
             return p;
           }),
           "nu"_a = 1.0, "K"_a = 0.25, "delta"_a = 0.0, "epsilon"_a = 0.0, "omega_L"_a = py::none())
      .def_readwrite("nu", &ModelParams::nu)
      .def_readwrite("K", &ModelParams::K)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("epsilon", &ModelParams::epsilon)
      .def_readwrite("omega_L", &ModelParams::omega_L)
      .def_property_readonly("eta", &ModelParams::eta)
      .def_property_readonly("C", &ModelParams::C)
      .def_property_readonly("gamma", &ModelParams::gamma)
      .def_property_readonly("scalar_shift", &ModelParams::scalar_shift)
      .def_property_readonly("jc_coupling", &ModelParams::jc_coupling)
      .def_property_readonly("resonant", &ModelParams::resonant)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(nu=" + std::to_string(p.nu) + ", K=" + std::to_string(p.K) +
               ", delta=" + std::to_string(p.delta) + ", epsilon=" + std::to_string(p.epsilon) + ")";
      });

  m.def("build_H0", [](const ModelParams& p, const FockTruncation& t) { return build_H0(p, t).matrix(); });
  m.def("build_W", [](const ModelParams& p, const FockTruncation& t) { return build_W(p, t).matrix(); });
  m.def("build_H_eta", [](const ModelParams& p, const FockTruncation& t) { return build_H_eta(p, t).matrix(); });
  m.def("build_H2", [](const ModelParams& p, const FockTruncation& t) { return build_H2(p, t).matrix(); });
  m.def("build_H_JC", [](const ModelParams& p, const FockTruncation& t) { return build_H_JC(p, t).matrix(); });
  m.def("build_Ht", [](const ModelParams& p, const FockTruncation& tr, double t) {
    return build_Ht(p, tr, t).matrix();
  });

  py::class_<SpectralLine>(m, "SpectralLine")
      .def_readonly("n", &SpectralLine::n)
      .def_readonly("s", &SpectralLine::s)
      .def_readonly("E0", &SpectralLine::E0)
      .def_readonly("E2_eps2", &SpectralLine::E2_times_eps2)
      .def_readonly("E_total", &SpectralLine::E_total)
      .def_readonly("E_star", &SpectralLine::E_star);

  m.def("unperturbed_energy", &unperturbed_energy, "p"_a, "n"_a, "s"_a);
  m.def("second_order_energy", &second_order_energy, "p"_a, "n"_a, "s"_a);
  m.def("factorized_energy", &factorized_energy, "p"_a, "n"_a, "s"_a);
  m.def("spectral_line", &spectral_line, "p"_a, "n"_a, "s"_a);
  m.def("spectral_lines", &spectral_lines, "p"_a, "n_levels"_a);

  m.def(
      "classify_regime",
      [](const ModelParams& p) {
        const RegimeReport r = classify_regime(p);
        return py::dict("regime"_a = std::string(to_string(r.regime)), "r"_a = r.r, "gamma"_a = r.gamma,
                        "perturbative"_a = r.perturbative, "m"_a = r.m, "delta_frac"_a = r.delta_frac,
                        "notes"_a = r.notes);
      },
      "p"_a);

  m.def(
      "exact_levels",
      [](const ModelParams& p, const FockTruncation& t) {
        const LevelMatch lm = exact_levels(p, t);
        py::dict levels;
        for (const auto& [b, lvl] : lm.levels) {
          levels[py::make_tuple(b.n, b.s)] = py::make_tuple(lvl.energy, lvl.overlap);
        }
        py::list ambiguous;
        for (const BasisIndex& b : lm.ambiguous) ambiguous.append(py::make_tuple(b.n, b.s));
        return py::dict("eigenvalues"_a = lm.solution.eigenvalues, "eigenvectors"_a = lm.solution.eigenvectors,
                        "levels"_a = levels, "ambiguous"_a = ambiguous);
      },
      "p"_a, "trunc"_a);

  m.def(
      "jc_eigenvalues",
      [](const ModelParams& p, int n) {
        const JCLevels l = jc_eigenvalues(p, n);
        return py::make_tuple(l.lower, l.upper);
      },
      "p"_a, "n"_a);

  m.def(
      "integrate_Ht",
      [](const ModelParams& p, const FockTruncation& t, const Vector& psi0, const std::vector<double>& times,
         double tol) {
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = integrate_Ht(p, t, psi0, times, tol);
        }
        return trajectory_dict(tr);
      },
      "p"_a, "trunc"_a, "psi0"_a, "times"_a, "tol"_a = 1e-10);

  m.def(
      "assemble_trajectory",
      [](const ModelParams& p, const FockTruncation& t, const std::map<std::pair<int, int>, Complex>& amps,
         const std::vector<double>& times, int order) {
        return trajectory_dict(assemble_trajectory(p, t, to_amps(amps), times, order));
      },
      "p"_a, "trunc"_a, "amps"_a, "times"_a, "order"_a = 1);

  m.def("check_algebra", [](int n_max, int n_guard) { return check_dict(check_algebra(FockTruncation(n_max, n_guard))); },
        "n_max"_a = 120, "n_guard"_a = kDefaultGuard);
  m.def("check_factorized_identity", [] { return check_dict(check_factorized_identity()); });
  m.def("check_first_order_energy", [](int draws, int n_levels, unsigned seed) {
    return check_dict(check_first_order_energy(draws, n_levels, seed));
  }, "draws"_a = 10, "n_levels"_a = 20, "seed"_a = 2024);
}
