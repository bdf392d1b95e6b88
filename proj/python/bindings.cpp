#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edgescope/diagnostics/continuity.hpp"
#include "edgescope/diagnostics/entropy.hpp"
#include "edgescope/diagnostics/lyapunov.hpp"
#include "edgescope/diagnostics/spectral.hpp"
#include "edgescope/diagnostics/tangent.hpp"
#include "edgescope/experiment/figures.hpp"
#include "edgescope/experiment/sweep.hpp"
#include "edgescope/numerics.hpp"
#include "edgescope/readout.hpp"
#include "edgescope/reservoir.hpp"
#include "edgescope/signals.hpp"

namespace py = pybind11;
using namespace edgescope;

namespace {

LyapunovReport reservoir_lyapunov(const NetworkSpec& net, const ReservoirParams& params,
                                  const ReservoirRun& run, const LyapunovOptions& options) {
    if (params.kind == ReservoirKind::MAP) {
        MapReservoirTangent sys(net, params, run.states);
        return lyapunov_report(sys, options);
    }
    OdeReservoirTangent sys(net, params, run.states, run.input_used);
    return lyapunov_report(sys, options);
}

LyapunovReport lorenz_lyapunov(const Matrix& states, double c1, double c2, double c3, double dt,
                               const LyapunovOptions& options) {
    LorenzTangent sys(states, c1, c2, c3, dt);
    return lyapunov_report(sys, options);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "polynomial reservoir computers driven to the edge of stability";

    // --- network and reservoir ------------------------------------------------
    py::class_<NetworkSpec>(m, "NetworkSpec")
        .def(py::init<>())
        .def_readwrite("M", &NetworkSpec::M)
        .def_readwrite("A", &NetworkSpec::A)
        .def_readwrite("W", &NetworkSpec::W)
        .def_readwrite("sigma", &NetworkSpec::sigma)
        .def_readwrite("seed", &NetworkSpec::seed);

    py::enum_<ReservoirKind>(m, "ReservoirKind")
        .value("ODE", ReservoirKind::ODE)
        .value("MAP", ReservoirKind::MAP);

    py::class_<ReservoirParams>(m, "ReservoirParams")
        .def(py::init<>())
        .def_readwrite("kind", &ReservoirParams::kind)
        .def_readwrite("p1", &ReservoirParams::p1)
        .def_readwrite("p2", &ReservoirParams::p2)
        .def_readwrite("p3", &ReservoirParams::p3)
        .def_readwrite("alpha", &ReservoirParams::alpha)
        .def_readwrite("dt", &ReservoirParams::dt);

    py::class_<ReservoirRun>(m, "ReservoirRun")
        .def_readonly("states", &ReservoirRun::states)
        .def_readonly("stable", &ReservoirRun::stable)
        .def_readonly("divergence_step", &ReservoirRun::divergence_step)
        .def_readonly("input_used", &ReservoirRun::input_used);

    m.def("build_network", &build_network, py::arg("seed"), py::arg("nodes"), py::arg("sigma"),
          py::arg("density") = 0.5);
    m.def(
        "run_reservoir",
        [](const NetworkSpec& net, const ReservoirParams& params, const Vector& input,
           std::optional<Vector> r0, double threshold) {
            const Vector start = r0 ? *r0 : Vector(Vector::Zero(net.M));
            return run_reservoir(net, params, input, start, threshold);
        },
        py::arg("net"), py::arg("params"), py::arg("input"), py::arg("r0") = std::nullopt,
        py::arg("threshold") = kDefaultDivergenceThreshold);

    // --- drivers ---------------------------------------------------------------
    py::class_<DriverTrajectory>(m, "DriverTrajectory")
        .def_readonly("states", &DriverTrajectory::states)
        .def_readonly("dt", &DriverTrajectory::dt)
        .def_readonly("input_index", &DriverTrajectory::input_index)
        .def_readonly("target_index", &DriverTrajectory::target_index)
        .def_readonly("input", &DriverTrajectory::input)
        .def_readonly("target", &DriverTrajectory::target);

    m.def("lorenz_trajectory", &lorenz_trajectory, py::arg("n_steps"), py::arg("transient"),
          py::arg("seed"), py::arg("c1") = 10.0, py::arg("c2") = 28.0, py::arg("c3") = 8.0 / 3.0,
          py::arg("dt") = 0.02);
    m.def("map3d_trajectory", &map3d_trajectory, py::arg("n_steps"), py::arg("transient"),
          py::arg("seed"));
    m.def("normalize_input", &normalize_input, py::arg("raw"));

    // --- readout ---------------------------------------------------------------
    py::class_<FitWindow>(m, "FitWindow")
        .def(py::init<>())
        .def(py::init<long, long>(), py::arg("discard"), py::arg("fit"))
        .def_readwrite("discard", &FitWindow::discard)
        .def_readwrite("fit", &FitWindow::fit);

    py::class_<ReadoutModel>(m, "ReadoutModel")
        .def(py::init<>())
        .def_readwrite("c", &ReadoutModel::c)
        .def_readwrite("lambda_rel", &ReadoutModel::lambda_rel)
        .def_readwrite("window", &ReadoutModel::window)
        .def_readwrite("bias_column", &ReadoutModel::bias_column);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("model", &TrainResult::model)
        .def_readonly("delta_rc", &TrainResult::delta_rc);

    m.def("train_readout", &train_readout, py::arg("run"), py::arg("target"),
          py::arg("lambda_rel"), py::arg("window") = FitWindow{}, py::arg("bias_column") = false);
    m.def("evaluate_readout", &evaluate_readout, py::arg("model"), py::arg("run"),
          py::arg("target"));

    // --- diagnostics -----------------------------------------------------------
    py::class_<LyapunovOptions>(m, "LyapunovOptions")
        .def(py::init<>())
        .def_readwrite("k", &LyapunovOptions::k)
        .def_readwrite("transient_exclude", &LyapunovOptions::transient_exclude)
        .def_readwrite("with_max_local", &LyapunovOptions::with_max_local)
        .def_readwrite("power_iterations", &LyapunovOptions::power_iterations)
        .def_readwrite("power_tol", &LyapunovOptions::power_tol);

    py::class_<LyapunovReport>(m, "LyapunovReport")
        .def_readonly("exponents", &LyapunovReport::exponents)
        .def_readonly("max_local", &LyapunovReport::max_local)
        .def_readonly("d_ky", &LyapunovReport::d_ky)
        .def_readonly("ky_j", &LyapunovReport::ky_j)
        .def_readonly("ky_saturated", &LyapunovReport::ky_saturated);

    py::class_<KaplanYorkeResult>(m, "KaplanYorkeResult")
        .def_readonly("d_ky", &KaplanYorkeResult::d_ky)
        .def_readonly("j", &KaplanYorkeResult::j)
        .def_readonly("saturated", &KaplanYorkeResult::saturated);

    m.def("kaplan_yorke", &kaplan_yorke, py::arg("exponents"));
    m.def("reservoir_lyapunov", &reservoir_lyapunov, py::arg("net"), py::arg("params"),
          py::arg("run"), py::arg("options") = LyapunovOptions{},
          py::call_guard<py::gil_scoped_release>());
    {
        LyapunovOptions lorenz_defaults;
        lorenz_defaults.k = 3;
        lorenz_defaults.transient_exclude = 1000;
        m.def("lorenz_lyapunov", &lorenz_lyapunov, py::arg("states"), py::arg("c1") = 10.0,
              py::arg("c2") = 28.0, py::arg("c3") = 8.0 / 3.0, py::arg("dt") = 0.02,
              py::arg("options") = lorenz_defaults, py::call_guard<py::gil_scoped_release>());
    }

    py::class_<EntropyReport>(m, "EntropyReport")
        .def_readonly("H", &EntropyReport::H)
        .def_readonly("n_symbols", &EntropyReport::n_symbols)
        .def_readonly("window", &EntropyReport::window)
        .def_readonly("counts", &EntropyReport::counts);

    m.def("ordinal_entropy", &ordinal_entropy, py::arg("states"), py::arg("window") = 4);

    py::enum_<ContinuityDirection>(m, "ContinuityDirection")
        .value("Forward", ContinuityDirection::Forward)
        .value("Reverse", ContinuityDirection::Reverse);

    py::class_<ContinuityParams>(m, "ContinuityParams")
        .def(py::init<>())
        .def_readwrite("eps_fraction", &ContinuityParams::eps_fraction)
        .def_readwrite("n_ref", &ContinuityParams::n_ref)
        .def_readwrite("theiler", &ContinuityParams::theiler)
        .def_readwrite("delta_shrink", &ContinuityParams::delta_shrink)
        .def_readwrite("seed", &ContinuityParams::seed)
        .def_readwrite("floor_pairs", &ContinuityParams::floor_pairs);

    py::class_<ContinuityReport>(m, "ContinuityReport")
        .def_readonly("psi", &ContinuityReport::psi)
        .def_readonly("direction", &ContinuityReport::direction)
        .def_readonly("eps_fraction", &ContinuityReport::eps_fraction)
        .def_readonly("n_ref", &ContinuityReport::n_ref)
        .def_readonly("theiler", &ContinuityReport::theiler);

    m.def("continuity_stat", &continuity_stat, py::arg("x"), py::arg("y"),
          py::arg("params") = ContinuityParams{},
          py::arg("direction") = ContinuityDirection::Forward,
          py::call_guard<py::gil_scoped_release>());

    py::class_<SpectralDiffReport>(m, "SpectralDiffReport")
        .def_readonly("delta_f", &SpectralDiffReport::delta_f)
        .def_readonly("per_node_terms", &SpectralDiffReport::per_node_terms)
        .def_readonly("guard_hits", &SpectralDiffReport::guard_hits);

    m.def("spectral_difference", &spectral_difference, py::arg("target"), py::arg("states"),
          py::arg("prose_variant") = false);

    // --- numerics --------------------------------------------------------------
    m.def("spectral_radius", &spectral_radius, py::arg("a"), py::arg("squarings") = 20);
    m.def("rescale_to_radius", &rescale_to_radius, py::arg("a"), py::arg("target"));
    m.def("ridge_solve", &ridge_solve, py::arg("design"), py::arg("target"),
          py::arg("lambda_rel"));

    // --- sweeps and figures ------------------------------------------------------
    py::enum_<DriverKind>(m, "DriverKind")
        .value("Lorenz", DriverKind::Lorenz)
        .value("Map3d", DriverKind::Map3d);

    py::class_<DriverSettings>(m, "DriverSettings")
        .def(py::init<>())
        .def_readwrite("kind", &DriverSettings::kind)
        .def_readwrite("c1", &DriverSettings::c1)
        .def_readwrite("c2", &DriverSettings::c2)
        .def_readwrite("c3", &DriverSettings::c3)
        .def_readwrite("dt", &DriverSettings::dt)
        .def_readwrite("transient", &DriverSettings::transient)
        .def_readwrite("normalize_target", &DriverSettings::normalize_target);

    py::class_<DiagnosticsToggles>(m, "DiagnosticsToggles")
        .def(py::init<>())
        .def_readwrite("lyapunov", &DiagnosticsToggles::lyapunov)
        .def_readwrite("max_local", &DiagnosticsToggles::max_local)
        .def_readwrite("entropy", &DiagnosticsToggles::entropy)
        .def_readwrite("continuity", &DiagnosticsToggles::continuity)
        .def_readwrite("spectral", &DiagnosticsToggles::spectral);

    py::class_<DiagnosticsSettings>(m, "DiagnosticsSettings")
        .def(py::init<>())
        .def_readwrite("enable", &DiagnosticsSettings::enable)
        .def_readwrite("lyapunov_k", &DiagnosticsSettings::lyapunov_k)
        .def_readwrite("entropy_window", &DiagnosticsSettings::entropy_window)
        .def_readwrite("continuity", &DiagnosticsSettings::continuity)
        .def_readwrite("spectral_prose_variant", &DiagnosticsSettings::spectral_prose_variant);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("auto_range", &GridSpec::auto_range)
        .def_readwrite("lo", &GridSpec::lo)
        .def_readwrite("hi", &GridSpec::hi)
        .def_readwrite("n_points", &GridSpec::n_points);

    py::class_<AutoRangeSettings>(m, "AutoRangeSettings")
        .def(py::init<>())
        .def_readwrite("init", &AutoRangeSettings::init)
        .def_readwrite("stable_lambda_max", &AutoRangeSettings::stable_lambda_max)
        .def_readwrite("edge_rel_tol", &AutoRangeSettings::edge_rel_tol)
        .def_readwrite("overshoot", &AutoRangeSettings::overshoot);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("driver", &SweepConfig::driver)
        .def_readwrite("reservoir_kind", &SweepConfig::reservoir_kind)
        .def_readwrite("M", &SweepConfig::M)
        .def_readwrite("density", &SweepConfig::density)
        .def_readwrite("sigma", &SweepConfig::sigma)
        .def_readwrite("p1", &SweepConfig::p1)
        .def_readwrite("p2", &SweepConfig::p2)
        .def_readwrite("p3", &SweepConfig::p3)
        .def_readwrite("alpha", &SweepConfig::alpha)
        .def_readwrite("reservoir_dt", &SweepConfig::reservoir_dt)
        .def_readwrite("swept", &SweepConfig::swept)
        .def_readwrite("grid", &SweepConfig::grid)
        .def_readwrite("auto_range", &SweepConfig::auto_range)
        .def_readwrite("seeds", &SweepConfig::seeds)
        .def_readwrite("train_window", &SweepConfig::train_window)
        .def_readwrite("test_window", &SweepConfig::test_window)
        .def_readwrite("lambda_rel", &SweepConfig::lambda_rel)
        .def_readwrite("threshold", &SweepConfig::threshold)
        .def_readwrite("bias_column", &SweepConfig::bias_column)
        .def_readwrite("diag", &SweepConfig::diag)
        .def_readwrite("jobs", &SweepConfig::jobs);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("seed", &SweepRecord::seed)
        .def_readonly("param_value", &SweepRecord::param_value)
        .def_readonly("stable", &SweepRecord::stable)
        .def_readonly("delta_rc", &SweepRecord::delta_rc)
        .def_readonly("delta_tx", &SweepRecord::delta_tx)
        .def_readonly("lambda1", &SweepRecord::lambda1)
        .def_readonly("lambda2", &SweepRecord::lambda2)
        .def_readonly("lambda3", &SweepRecord::lambda3)
        .def_readonly("lambda4", &SweepRecord::lambda4)
        .def_readonly("max_local", &SweepRecord::max_local)
        .def_readonly("d_ky", &SweepRecord::d_ky)
        .def_readonly("ky_j", &SweepRecord::ky_j)
        .def_readonly("H", &SweepRecord::H)
        .def_readonly("n_symbols", &SweepRecord::n_symbols)
        .def_readonly("psi_fwd", &SweepRecord::psi_fwd)
        .def_readonly("psi_rev", &SweepRecord::psi_rev)
        .def_readonly("delta_f", &SweepRecord::delta_f);

    m.def("make_driver", &make_driver, py::arg("config"), py::arg("seed"));
    m.def("run_sweep", &run_sweep, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("find_edge", &find_edge, py::arg("config"), py::arg("tolerance"),
          py::call_guard<py::gil_scoped_release>());
    m.def("find_edge_seeded", &find_edge_seeded, py::arg("config"), py::arg("seed"),
          py::arg("tolerance"), py::call_guard<py::gil_scoped_release>());
    m.def("figure_base_config", &figure_base_config, py::arg("set_name"));
    m.def("figure_ids", [] { return figure_ids(); });

    py::class_<FigureResult>(m, "FigureResult")
        .def_readonly("id", &FigureResult::id)
        .def_readonly("passed", &FigureResult::pass)
        .def_readonly("files", &FigureResult::files)
        .def_readonly("verdict_path", &FigureResult::verdict_path);

    m.def("reproduce_figure", &reproduce_figure, py::arg("id"), py::arg("out_dir"),
          py::arg("base_seed") = 1, py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>());
}
