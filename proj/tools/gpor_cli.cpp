// Experiment runner: executes the benchmark closed-loop runs, writes
// trajectory CSVs and metrics JSON, and exposes the regulator-equation
// oracle check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpor/experiment.hpp"

namespace {

using nlohmann::json;

void print_error(const std::string& kind, const std::string& message) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("IoError: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_one(const gpor::ExperimentConfig& cfg, const std::string& csv_path,
            const std::string& metrics_path) {
    const gpor::plants::PlantModel plant = gpor::make_plant(cfg);
    gpor::RunResult result = gpor::run_experiment(cfg);

    if (!csv_path.empty()) {
        gpor::write_trajectory(result.trajectory, plant, csv_path, cfg.oracle_overlay,
                               &cfg.lorenz);
        std::cout << "trajectory: " << csv_path << "\n";
    }
    const std::string metrics = gpor::metrics_to_json(result.metrics);
    if (!metrics_path.empty()) {
        std::ofstream out(metrics_path);
        out << metrics << "\n";
        std::cout << "metrics: " << metrics_path << "\n";
    } else {
        std::cout << metrics << "\n";
    }
    for (const auto& d : result.trajectory.diagnostics)
        std::cout << "diagnostic: " << d << "\n";
    std::cout << "wall_time_s: " << result.metrics.wall_time_seconds << "\n";
    return 0;
}

int cmd_compare_im(gpor::ExperimentConfig cfg) {
    cfg.regulator.gp_enabled = true;
    gpor::RunResult with_im = gpor::run_experiment(cfg);
    cfg.regulator.gp_enabled = false;
    gpor::RunResult without_im = gpor::run_experiment(cfg);

    json j;
    j["with_im"] = json::parse(gpor::metrics_to_json(with_im.metrics));
    j["without_im"] = json::parse(gpor::metrics_to_json(without_im.metrics));
    j["improved"] = with_im.metrics.rms_error_last_quarter <
                    without_im.metrics.rms_error_last_quarter;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_oracle_check() {
    const gpor::plants::LorenzParams p;
    const gpor::plants::PlantModel plant = gpor::plants::make_lorenz_plant(p);
    gpor::plants::SteadyMaps maps;
    maps.state = [&p](const gpor::Vector& w) {
        const auto s = gpor::plants::lorenz_steady_state(w, p);
        return gpor::Vector{s.z1, s.z2, s.y};
    };
    maps.feedforward = [&p](const gpor::Vector& w) {
        return gpor::plants::lorenz_ideal_feedforward(w, p);
    };
    const double period = 2.0 * 3.14159265358979323846 / p.sigma_exo;
    const double residual = gpor::plants::regulator_residual(plant, maps, {0.0, 4.0}, period);
    std::cout << "regulator-equation residual over one exosystem period: " << residual << "\n";
    if (residual <= 1e-4) {
        std::cout << "PASS (<= 1e-4)\n";
        return 0;
    }
    std::cout << "FAIL (> 1e-4)\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid GP-based output-regulation benchmark runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string csv_path;
    std::string metrics_path;
    int example_id = 0;

    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("config", config_path, "config file (key = value)")->required();
    run->add_option("--csv", csv_path, "trajectory CSV output path");
    run->add_option("--metrics", metrics_path, "metrics JSON output path");

    auto* repro = app.add_subcommand("reproduce", "Run a built-in benchmark (example1|2|3)");
    std::string which;
    repro->add_option("example", which, "example1, example2 or example3")->required();
    repro->add_option("--csv", csv_path, "trajectory CSV output path");
    repro->add_option("--metrics", metrics_path, "metrics JSON output path");

    auto* cmp = app.add_subcommand("compare-im", "Run with and without the learned feedforward");
    cmp->add_option("config", config_path, "config file")->required();

    app.add_subcommand("oracle-check", "Verify the Lorenz regulator-equation residual");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            gpor::ExperimentConfig cfg = gpor::parse_config(read_file(config_path));
            if (csv_path.empty()) csv_path = cfg.output_path;
            return run_one(cfg, csv_path, metrics_path);
        }
        if (repro->parsed()) {
            if (which == "example1") example_id = 1;
            else if (which == "example2") example_id = 2;
            else if (which == "example3") example_id = 3;
            else {
                print_error("InvalidValue", "expected example1|example2|example3");
                return 2;
            }
            gpor::ExperimentConfig cfg = gpor::example_config(example_id);
            if (csv_path.empty()) csv_path = which + ".csv";
            return run_one(cfg, csv_path, metrics_path);
        }
        if (cmp->parsed()) {
            return cmd_compare_im(gpor::parse_config(read_file(config_path)));
        }
        return cmd_oracle_check();
    } catch (const gpor::ConfigError& e) {
        print_error(e.kind, e.what());
        return 2;
    } catch (const gpor::NonFiniteState& e) {
        print_error("NonFiniteState", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("RuntimeError", e.what());
        return 1;
    }
}
