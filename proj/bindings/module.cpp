#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "gpelab/config.hpp"
#include "gpelab/control.hpp"
#include "gpelab/elliptic.hpp"
#include "gpelab/errors.hpp"
#include "gpelab/evolution.hpp"
#include "gpelab/io.hpp"
#include "gpelab/model.hpp"
#include "gpelab/spectral.hpp"
#include "gpelab/stationary.hpp"
#include "gpelab/sweep.hpp"
#include "gpelab/version.hpp"

namespace py = pybind11;
using namespace gpelab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stationary states, stability spectra, and time evolution for the "
            "quasi-1D Gross-Pitaevskii equation";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "GpConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "GpDomainError", PyExc_ValueError);
  py::register_exception<NonconvergenceError>(m, "GpNonconvergenceError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "GpNumericError", PyExc_RuntimeError);

  // elliptic kernel
  m.def("complete_K", &complete_K, py::arg("k"),
        "Complete elliptic integral of the first kind, modulus convention");
  m.def(
      "jacobi_sn_cn_dn",
      [](double x, double k) {
        const JacobiTriple j = jacobi_sn_cn_dn(x, k);
        return py::make_tuple(j.sn, j.cn, j.dn);
      },
      py::arg("x"), py::arg("k"), "(sn, cn, dn) at real argument x");

  // grid and potentials
  py::enum_<LaplacianKind>(m, "LaplacianKind")
      .value("FD2", LaplacianKind::FD2)
      .value("Spectral", LaplacianKind::Spectral);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, double>(), py::arg("n"), py::arg("length"))
      .def_readonly("n", &Grid::n)
      .def_readonly("length", &Grid::length)
      .def_readonly("spacing", &Grid::spacing)
      .def_readonly("x", &Grid::x);

  py::class_<ZeroPotential>(m, "ZeroPotential").def(py::init<>());
  py::class_<SnLattice>(m, "SnLattice")
      .def(py::init<double, double>(), py::arg("V0"), py::arg("k"))
      .def_readwrite("V0", &SnLattice::V0)
      .def_readwrite("k", &SnLattice::k);
  py::class_<CosineLattice>(m, "CosineLattice")
      .def(py::init<double, double>(), py::arg("V0"), py::arg("wavenumber"))
      .def_readwrite("V0", &CosineLattice::V0)
      .def_readwrite("wavenumber", &CosineLattice::wavenumber);
  py::class_<TabulatedPotential>(m, "TabulatedPotential")
      .def(py::init([](Eigen::VectorXd x, Eigen::VectorXd V) {
             TabulatedPotential t;
             t.x = std::move(x);
             t.V = std::move(V);
             return t;
           }),
           py::arg("x"), py::arg("V"))
      .def_readonly("x", &TabulatedPotential::x)
      .def_readonly("V", &TabulatedPotential::V);

  m.def("potential_period", &potential_period, py::arg("potential"));
  m.def("grid_over_periods", &grid_over_periods, py::arg("potential"), py::arg("n"),
        py::arg("periods") = 1);
  m.def("sample_potential", &sample_potential, py::arg("potential"), py::arg("grid"));
  m.def("laplacian_operator", &laplacian_operator, py::arg("grid"), py::arg("kind"));
  m.def("spectral_second_derivative", &spectral_second_derivative, py::arg("grid"),
        py::arg("v"));

  // stationary states
  py::class_<StationaryState>(m, "StationaryState")
      .def(py::init<>())
      .def_readwrite("grid", &StationaryState::grid)
      .def_readwrite("potential", &StationaryState::potential)
      .def_readwrite("V", &StationaryState::V)
      .def_readwrite("R", &StationaryState::R)
      .def_readwrite("mu", &StationaryState::mu)
      .def_readwrite("g1", &StationaryState::g1)
      .def_readwrite("lap", &StationaryState::lap)
      .def_readwrite("trivial", &StationaryState::trivial)
      .def_readonly("converged", &StationaryState::converged)
      .def_readonly("newton_iterations", &StationaryState::newton_iterations);

  py::class_<TFState>(m, "TFState")
      .def_readonly("R_tf", &TFState::R_tf)
      .def_readonly("mu_tf", &TFState::mu_tf)
      .def_readonly("g1", &TFState::g1)
      .def_readonly("empty", &TFState::empty);

  py::class_<NewtonOptions>(m, "NewtonOptions")
      .def(py::init<>())
      .def_readwrite("tol", &NewtonOptions::tol)
      .def_readwrite("max_iter", &NewtonOptions::max_iter)
      .def_readwrite("lap", &NewtonOptions::lap);

  m.def("exact_sn_state", &exact_sn_state, py::arg("V0"), py::arg("k"), py::arg("g1"),
        py::arg("grid"), py::arg("lap") = LaplacianKind::Spectral);
  m.def("solve_newton", &solve_newton, py::arg("potential"), py::arg("mu"), py::arg("g1"),
        py::arg("guess"), py::arg("grid"), py::arg("options") = NewtonOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("solve_fixed_N", &solve_fixed_N, py::arg("potential"), py::arg("N"),
        py::arg("n_lattice"), py::arg("g1"), py::arg("grid"),
        py::arg("options") = NewtonOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("mu_TF", &mu_TF, py::arg("N"), py::arg("n_lattice"), py::arg("g1"),
        py::arg("potential"), py::arg("period"));
  m.def("thomas_fermi_state", &thomas_fermi_state, py::arg("potential"), py::arg("mu"),
        py::arg("g1"), py::arg("grid"));
  m.def("residual", py::overload_cast<const StationaryState&>(&residual), py::arg("state"));
  m.def("atom_number", &atom_number, py::arg("state"), py::arg("n_lattice") = 1);

  // linearization operators and classification
  py::enum_<Stability>(m, "Stability")
      .value("Stable", Stability::Stable)
      .value("Unstable", Stability::Unstable)
      .value("Undetermined", Stability::Undetermined);

  py::class_<StabilityVerdict>(m, "StabilityVerdict")
      .def_readonly("classification", &StabilityVerdict::classification)
      .def_readonly("alpha_g", &StabilityVerdict::alpha_g)
      .def_readonly("beta_g", &StabilityVerdict::beta_g)
      .def_readonly("min_product_eigenvalue_real_part",
                    &StabilityVerdict::min_product_eigenvalue_real_part)
      .def_readonly("has_complex_product_eigenvalue",
                    &StabilityVerdict::has_complex_product_eigenvalue)
      .def_readonly("lambda_growth", &StabilityVerdict::lambda_growth)
      .def_readonly("mu_s", &StabilityVerdict::mu_s)
      .def_readonly("route", &StabilityVerdict::route)
      .def_readonly("eps", &StabilityVerdict::eps)
      .def_property_readonly("instability_band",
                             [](const StabilityVerdict& v)
                                 -> std::optional<std::pair<double, double>> {
                               if (!v.instability_band) return std::nullopt;
                               return std::make_pair(v.instability_band->lo,
                                                     v.instability_band->hi);
                             });

  m.def(
      "build_Ln",
      [](const StationaryState& st, int n) { return build_Ln(st, n).m; },
      py::arg("state"), py::arg("n"), "Dense L1 or L3 operator matrix");
  m.def(
      "product_spectrum",
      [](const StationaryState& st) {
        return product_spectrum(build_Ln(st, 1), build_Ln(st, 3));
      },
      py::arg("state"), "Eigenvalues of L1*L3 sorted by (Re, Im)");
  m.def("classify", py::overload_cast<const StationaryState&>(&classify), py::arg("state"));
  m.def("classify", py::overload_cast<const StationaryState&, double>(&classify),
        py::arg("state"), py::arg("eps"));
  m.def("default_classifier_eps", &default_classifier_eps, py::arg("state"));
  m.def("mu_stability", &mu_stability, py::arg("state"));
  m.def(
      "mu_instability_band",
      [](const StationaryState& st) -> std::optional<std::pair<double, double>> {
        const auto band = mu_instability_band(st);
        if (!band) return std::nullopt;
        return std::make_pair(band->lo, band->hi);
      },
      py::arg("state"));

  py::class_<LinearMode>(m, "LinearMode")
      .def_readonly("product_eigenvalue", &LinearMode::product_eigenvalue)
      .def_readonly("lambda1", &LinearMode::lambda1)
      .def_readonly("lambda2", &LinearMode::lambda2)
      .def_readonly("phi1", &LinearMode::phi1)
      .def_readonly("phi2", &LinearMode::phi2);
  m.def("realize_mode", &realize_mode, py::arg("state"), py::arg("sorted_index"));

  // time evolution
  py::enum_<Scheme>(m, "Scheme")
      .value("Leapfrog", Scheme::Leapfrog)
      .value("RK4", Scheme::RK4);

  py::class_<PerturbationField>(m, "PerturbationField")
      .def(py::init<>())
      .def(py::init([](Eigen::VectorXd phi1, Eigen::VectorXd phi2) {
             PerturbationField f;
             f.phi1 = std::move(phi1);
             f.phi2 = std::move(phi2);
             return f;
           }),
           py::arg("phi1"), py::arg("phi2"))
      .def_readwrite("phi1", &PerturbationField::phi1)
      .def_readwrite("phi2", &PerturbationField::phi2)
      .def_readwrite("time", &PerturbationField::time);

  py::class_<GrowthFit>(m, "GrowthFit")
      .def_readonly("rate", &GrowthFit::rate)
      .def_readonly("fit_residual", &GrowthFit::fit_residual)
      .def_readonly("low_confidence", &GrowthFit::low_confidence);

  py::class_<PerturbationTrajectory>(m, "PerturbationTrajectory")
      .def_readonly("times", &PerturbationTrajectory::times)
      .def_readonly("norm_phi1", &PerturbationTrajectory::norm_phi1)
      .def_readonly("norm_phi2", &PerturbationTrajectory::norm_phi2)
      .def_readonly("snapshots", &PerturbationTrajectory::snapshots)
      .def_readonly("final_state", &PerturbationTrajectory::final_state);

  m.def("default_dt", &default_dt, py::arg("state"));
  m.def("evolve_linearized", &evolve_linearized, py::arg("state"), py::arg("init"),
        py::arg("dt"), py::arg("steps"), py::arg("scheme") = Scheme::Leapfrog,
        py::arg("record_every") = 1, py::arg("snapshot_every") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<ModalAmplitudes>(m, "ModalAmplitudes")
      .def_static("from_initial_data", &ModalAmplitudes::from_initial_data, py::arg("T1_0"),
                  py::arg("T2_0"), py::arg("T1dot_0"), py::arg("T2dot_0"))
      .def_static("from_rates", &ModalAmplitudes::from_rates, py::arg("lambda1"),
                  py::arg("lambda2"), py::arg("T1_0"), py::arg("T2_0"))
      .def_readonly("T1_0", &ModalAmplitudes::T1_0)
      .def_readonly("T2_0", &ModalAmplitudes::T2_0)
      .def_readonly("T1dot_0", &ModalAmplitudes::T1dot_0)
      .def_readonly("T2dot_0", &ModalAmplitudes::T2dot_0)
      .def_readonly("lambda1", &ModalAmplitudes::lambda1)
      .def_readonly("lambda2", &ModalAmplitudes::lambda2)
      .def_readonly("lambda_", &ModalAmplitudes::lambda)
      .def_readonly("A1", &ModalAmplitudes::A1)
      .def_readonly("B1", &ModalAmplitudes::B1)
      .def_readonly("A2", &ModalAmplitudes::A2)
      .def_readonly("B2", &ModalAmplitudes::B2);
  m.def("modal_solution", &modal_solution, py::arg("amplitudes"), py::arg("t"));

  py::class_<GpeTrajectory>(m, "GpeTrajectory")
      .def_readonly("times", &GpeTrajectory::times)
      .def_readonly("norm", &GpeTrajectory::norm)
      .def_readonly("energy", &GpeTrajectory::energy)
      .def_readonly("snapshot_times", &GpeTrajectory::snapshot_times)
      .def_readonly("snapshots", &GpeTrajectory::snapshots)
      .def_readonly("final_psi", &GpeTrajectory::final_psi)
      .def_readonly("completed", &GpeTrajectory::completed)
      .def_readonly("last_valid_time", &GpeTrajectory::last_valid_time);

  m.def("evolve_gpe", &evolve_gpe, py::arg("psi0"), py::arg("potential"), py::arg("g1"),
        py::arg("grid"), py::arg("dt"), py::arg("steps"), py::arg("record_every") = 1,
        py::arg("snapshot_every") = 0, py::call_guard<py::gil_scoped_release>());

  py::class_<FirstCorrections>(m, "FirstCorrections")
      .def_readonly("delta_theta", &FirstCorrections::delta_theta)
      .def_readonly("delta_density", &FirstCorrections::delta_density)
      .def_readonly("masked", &FirstCorrections::masked);
  m.def("first_corrections", &first_corrections, py::arg("state"), py::arg("perturbation"),
        py::arg("eps"), py::arg("floor_rel") = 1e-6);
  m.def("growth_rate", &growth_rate, py::arg("trajectory"), py::arg("t_lo"), py::arg("t_hi"),
        py::arg("confidence_residual") = 0.1);

  // initial-condition control
  py::enum_<CriterionVerdict>(m, "CriterionVerdict")
      .value("Stable", CriterionVerdict::Stable)
      .value("Unstable", CriterionVerdict::Unstable)
      .value("Marginal", CriterionVerdict::Marginal);
  py::enum_<ControlVariant>(m, "ControlVariant")
      .value("Suppressed", ControlVariant::Suppressed)
      .value("Unsuppressed", ControlVariant::Unsuppressed)
      .value("SignSplit", ControlVariant::SignSplit);

  py::class_<ControlSignal>(m, "ControlSignal")
      .def(py::init<double, double, double, double>(), py::arg("T1_0"), py::arg("T2_0"),
           py::arg("T1dot_0"), py::arg("T2dot_0"))
      .def_readonly("T1_0", &ControlSignal::T1_0)
      .def_readonly("T2_0", &ControlSignal::T2_0)
      .def_readonly("T1dot_0", &ControlSignal::T1dot_0)
      .def_readonly("T2dot_0", &ControlSignal::T2dot_0)
      .def_readonly("lambda_squared", &ControlSignal::lambda_squared);
  m.def("initial_criterion", &initial_criterion, py::arg("signal"));
  m.def("suppression_signal", &suppression_signal, py::arg("lambda_"), py::arg("T1_0"),
        py::arg("T2_0"));

  py::class_<ControlOptions>(m, "ControlOptions")
      .def(py::init<>())
      .def_readwrite("dt", &ControlOptions::dt)
      .def_readwrite("t_end", &ControlOptions::t_end);

  py::class_<ControlExperimentReport>(m, "ControlExperimentReport")
      .def_readonly("variant", &ControlExperimentReport::variant)
      .def_readonly("mode_index", &ControlExperimentReport::mode_index)
      .def_readonly("product_eigenvalue", &ControlExperimentReport::product_eigenvalue)
      .def_readonly("lambda1", &ControlExperimentReport::lambda1)
      .def_readonly("lambda2", &ControlExperimentReport::lambda2)
      .def_readonly("lambda_", &ControlExperimentReport::lambda)
      .def_readonly("signal", &ControlExperimentReport::signal)
      .def_readonly("criterion", &ControlExperimentReport::criterion)
      .def_readonly("controlled", &ControlExperimentReport::controlled)
      .def_readonly("baseline", &ControlExperimentReport::baseline)
      .def_readonly("fit_controlled", &ControlExperimentReport::fit_controlled)
      .def_readonly("fit_baseline", &ControlExperimentReport::fit_baseline)
      .def_readonly("max_ratio_controlled", &ControlExperimentReport::max_ratio_controlled)
      .def_readonly("max_ratio_baseline", &ControlExperimentReport::max_ratio_baseline)
      .def_readonly("bounded_controlled", &ControlExperimentReport::bounded_controlled)
      .def_readonly("bounded_baseline", &ControlExperimentReport::bounded_baseline)
      .def_readonly("suppression_ratio", &ControlExperimentReport::suppression_ratio);
  m.def("control_experiment", &control_experiment, py::arg("state"), py::arg("mode_index"),
        py::arg("variant"), py::arg("options") = ControlOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("control_report_text", &control_report_text, py::arg("report"));

  // parameter sweeps
  py::class_<SweepAxis>(m, "SweepAxis")
      .def(py::init([](std::string name, std::vector<double> values) {
             SweepAxis a;
             a.name = std::move(name);
             a.values = std::move(values);
             return a;
           }),
           py::arg("name"), py::arg("values"))
      .def_readwrite("name", &SweepAxis::name)
      .def_readwrite("values", &SweepAxis::values);
  py::class_<SweepBase>(m, "SweepBase")
      .def(py::init<>())
      .def_readwrite("V0", &SweepBase::V0)
      .def_readwrite("k", &SweepBase::k)
      .def_readwrite("g1", &SweepBase::g1)
      .def_readwrite("mu", &SweepBase::mu)
      .def_readwrite("N", &SweepBase::N);
  py::class_<SweepSettings>(m, "SweepSettings")
      .def(py::init<>())
      .def_readwrite("grid_n", &SweepSettings::grid_n)
      .def_readwrite("periods", &SweepSettings::periods)
      .def_readwrite("lap", &SweepSettings::lap)
      .def_readwrite("newton_tol", &SweepSettings::newton_tol)
      .def_readwrite("newton_max_iter", &SweepSettings::newton_max_iter)
      .def_readwrite("classifier_eps", &SweepSettings::classifier_eps)
      .def_readwrite("source", &SweepSettings::source)
      .def_readwrite("n_lattice", &SweepSettings::n_lattice)
      .def_readwrite("max_points", &SweepSettings::max_points)
      .def_readwrite("workers", &SweepSettings::workers);
  py::class_<SweepPlan>(m, "SweepPlan")
      .def(py::init<>())
      .def_readwrite("axes", &SweepPlan::axes)
      .def_readwrite("base", &SweepPlan::base)
      .def_readwrite("settings", &SweepPlan::settings);
  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("V0", &SweepRecord::V0)
      .def_readonly("k", &SweepRecord::k)
      .def_readonly("g1", &SweepRecord::g1)
      .def_readonly("mu_in", &SweepRecord::mu_in)
      .def_readonly("N_in", &SweepRecord::N_in)
      .def_readonly("status", &SweepRecord::status)
      .def_readonly("verdict", &SweepRecord::verdict)
      .def_readonly("mu", &SweepRecord::mu)
      .def_readonly("mu_s", &SweepRecord::mu_s)
      .def_readonly("abs_mu_minus_mu_s", &SweepRecord::abs_mu_minus_mu_s)
      .def_readonly("alpha_g", &SweepRecord::alpha_g)
      .def_readonly("beta_g", &SweepRecord::beta_g)
      .def_readonly("min_product_re", &SweepRecord::min_product_re)
      .def_readonly("has_complex", &SweepRecord::has_complex)
      .def_readonly("lambda_growth", &SweepRecord::lambda_growth)
      .def_readonly("band_lo", &SweepRecord::band_lo)
      .def_readonly("band_hi", &SweepRecord::band_hi);
  m.def("run_sweep", &run_sweep, py::arg("plan"), py::call_guard<py::gil_scoped_release>());
  m.def("sweep_csv_header", &sweep_csv_header);
  m.def("sweep_csv_row", &sweep_csv_row, py::arg("record"));

  // serialization
  m.def("save_state", &save_state, py::arg("state"), py::arg("path"),
        py::arg("header") = std::string());
  m.def("load_state", &load_state, py::arg("path"));
  m.def("state_to_text", &state_to_text, py::arg("state"), py::arg("header") = std::string());
  m.def("state_from_text", &state_from_text, py::arg("text"),
        py::arg("name") = std::string("<text>"));
  m.def("verdict_text", &verdict_text, py::arg("state"), py::arg("verdict"));
  m.def("manifest_line", &manifest_line, py::arg("config_text"));
}
