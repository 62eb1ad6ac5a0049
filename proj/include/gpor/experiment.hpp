#pragma once

#include <optional>
#include <string>

#include "gpor/plants.hpp"
#include "gpor/regulator.hpp"

namespace gpor {

struct ConfigError : std::runtime_error {
    std::string kind;  // MissingKey | InvalidValue | UnknownKey
    std::string key;
    ConfigError(std::string kind_, std::string key_, const std::string& reason)
        : std::runtime_error(kind_ + ": " + key_ + (reason.empty() ? "" : " (" + reason + ")")),
          kind(std::move(kind_)),
          key(std::move(key_)) {}
};

enum class PlantKind { kLorenz, kExample2, kBioreactor };

struct ExperimentConfig {
    PlantKind plant = PlantKind::kLorenz;
    RegulatorConfig regulator;
    plants::LorenzParams lorenz;
    plants::BioreactorParams bioreactor;
    Vector plant_init;
    Vector w_init;
    double duration = 40.0;
    unsigned seed = 0;
    bool compare_im = false;
    bool oracle_overlay = false;
    std::string output_path;
};

/// Flat key = value text with dotted namespaces; '#' starts a comment.
/// Unknown keys are rejected. Per-plant defaults are applied first.
ExperimentConfig parse_config(const std::string& text);

/// Built-in configurations reproducing the three benchmark runs.
ExperimentConfig example_config(int which);  // 1, 2, or 3

plants::PlantModel make_plant(const ExperimentConfig& cfg);

struct RunMetrics {
    double final_abs_error = 0.0;
    double rms_error_last_quarter = 0.0;
    Vector sup_error_windows;  // sup|e| per 10%-of-duration segment
    std::size_t jump_count = 0;
    std::optional<double> gp_mse_vs_oracle;  // lorenz only
    double wall_time_seconds = 0.0;          // not serialized (nondeterministic)
};

struct RunResult {
    HybridTrajectory trajectory;
    RunMetrics metrics;
};

RunResult run_experiment(const ExperimentConfig& cfg);

RunMetrics compute_metrics(const ExperimentConfig& cfg, const HybridTrajectory& traj);

/// CSV: t,j,<plant cols>,w1,w2,eta_1..n,e,u,gp_mean,gp_var[,u_star].
void write_trajectory(const HybridTrajectory& traj, const plants::PlantModel& plant,
                      const std::string& path, bool oracle_overlay = false,
                      const plants::LorenzParams* lorenz = nullptr);

std::string metrics_to_json(const RunMetrics& m);

}  // namespace gpor
