// Python bindings for the core operations: GP regression, internal-model
// construction, the benchmark plants' oracles, and the hybrid simulation.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpor/experiment.hpp"
#include "gpor/gp.hpp"
#include "gpor/internal_model.hpp"
#include "gpor/plants.hpp"
#include "gpor/regulator.hpp"

namespace py = pybind11;
using namespace gpor;

PYBIND11_MODULE(_gpor, m) {
    m.doc() = "Hybrid GP-based output regulation: core operations";

    py::class_<gp::Kernel>(m, "Kernel")
        .def(py::init([](double sf2, Vector ls, double sn2) {
                 return gp::Kernel{sf2, std::move(ls), sn2};
             }),
             py::arg("signal_variance") = 1.0, py::arg("lengthscales") = Vector{1.0},
             py::arg("noise_variance") = 1e-6)
        .def_readwrite("signal_variance", &gp::Kernel::signal_variance)
        .def_readwrite("lengthscales", &gp::Kernel::lengthscales)
        .def_readwrite("noise_variance", &gp::Kernel::noise_variance);

    m.def("kernel_eval", &gp::kernel_eval);

    py::class_<gp::GpModel>(m, "GpModel")
        .def_static("fit",
                    [](const std::vector<Vector>& inputs, const Vector& targets,
                       const gp::Kernel& k) {
                        return gp::GpModel::fit(gp::Dataset{inputs, targets}, k);
                    })
        .def("predict_mean", &gp::GpModel::predict_mean)
        .def("predict_variance", &gp::GpModel::predict_variance)
        .def("log_marginal_likelihood", &gp::GpModel::log_marginal_likelihood)
        .def_property_readonly("degenerate_gram", &gp::GpModel::degenerate_gram);

    m.def(
        "optimize_hyperparameters",
        [](const std::vector<Vector>& inputs, const Vector& targets, const gp::Kernel& init,
           int budget) {
            auto r = gp::optimize_hyperparameters(gp::Dataset{inputs, targets}, init, budget);
            return py::make_tuple(r.kernel, r.log_marginal_likelihood, r.budget_exhausted);
        },
        py::arg("inputs"), py::arg("targets"), py::arg("init"), py::arg("budget"));

    py::class_<InternalModel>(m, "InternalModel")
        .def_readonly("dim", &InternalModel::dim)
        .def_property_readonly("M",
                               [](const InternalModel& im) {
                                   std::vector<Vector> rows(im.dim, Vector(im.dim));
                                   for (std::size_t i = 0; i < im.dim; ++i)
                                       for (std::size_t j = 0; j < im.dim; ++j)
                                           rows[i][j] = im.m(i, j);
                                   return rows;
                               })
        .def_readonly("N", &InternalModel::n);
    m.def("build_chain", &build_chain);
    m.def("max_real_eigenvalue_of_chain",
          [](std::size_t n) { return max_real_eigenvalue(build_chain(n).m); });

    m.def("lorenz_ideal_feedforward", [](const Vector& w) {
        return plants::lorenz_ideal_feedforward(w, plants::LorenzParams{});
    });
    m.def("lorenz_steady_state", [](const Vector& w) {
        const auto s = plants::lorenz_steady_state(w, plants::LorenzParams{});
        return py::make_tuple(s.z1, s.z2, s.y);
    });
    m.def("lorenz_regulator_residual", [](double duration) {
        const plants::LorenzParams p;
        plants::SteadyMaps maps;
        maps.state = [&p](const Vector& w) {
            const auto s = plants::lorenz_steady_state(w, p);
            return Vector{s.z1, s.z2, s.y};
        };
        maps.feedforward = [&p](const Vector& w) {
            return plants::lorenz_ideal_feedforward(w, p);
        };
        return plants::regulator_residual(plants::make_lorenz_plant(p), maps, {0.0, 4.0},
                                          duration);
    });

    py::class_<RunMetrics>(m, "RunMetrics")
        .def_readonly("final_abs_error", &RunMetrics::final_abs_error)
        .def_readonly("rms_error_last_quarter", &RunMetrics::rms_error_last_quarter)
        .def_readonly("sup_error_windows", &RunMetrics::sup_error_windows)
        .def_readonly("jump_count", &RunMetrics::jump_count)
        .def_readonly("gp_mse_vs_oracle", &RunMetrics::gp_mse_vs_oracle);

    m.def(
        "run_example",
        [](int which, double duration, bool gp_enabled) {
            ExperimentConfig cfg = example_config(which);
            if (duration > 0.0) cfg.duration = duration;
            cfg.regulator.gp_enabled = gp_enabled;
            return run_experiment(cfg).metrics;
        },
        py::arg("which"), py::arg("duration") = 0.0, py::arg("gp_enabled") = true,
        "Run a built-in benchmark and return its metrics");

    m.def(
        "run_config",
        [](const std::string& text, const std::string& csv_path) {
            ExperimentConfig cfg = parse_config(text);
            RunResult r = run_experiment(cfg);
            if (!csv_path.empty())
                write_trajectory(r.trajectory, make_plant(cfg), csv_path, cfg.oracle_overlay,
                                 &cfg.lorenz);
            return r.metrics;
        },
        py::arg("config_text"), py::arg("csv_path") = std::string{},
        "Parse a config document, run it, optionally write the trajectory CSV");
}
