#include "gpor/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace gpor {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("InvalidValue", key, "not a number: '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("InvalidValue", key, "expected true/false");
}

Vector parse_vector(const std::string& key, const std::string& value) {
    Vector out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
    if (out.empty()) throw ConfigError("InvalidValue", key, "empty vector");
    return out;
}

void validate(const ExperimentConfig& cfg) {
    const RegulatorConfig& r = cfg.regulator;
    if (!(r.k_p > 0.0)) throw ConfigError("InvalidValue", "regulator.k_p", "gain must be positive");
    if (!(r.sat_limit > 0.0))
        throw ConfigError("InvalidValue", "regulator.sat_limit", "must be positive");
    if (!(r.jump_period > 0.0))
        throw ConfigError("InvalidValue", "regulator.jump_period", "must be positive");
    if (r.window == 0) throw ConfigError("InvalidValue", "regulator.window", "must be >= 1");
    if (r.n_eta == 0) throw ConfigError("InvalidValue", "regulator.n_eta", "must be >= 1");
    if (!(r.step > 0.0)) throw ConfigError("InvalidValue", "regulator.step", "must be positive");
    const double ratio = r.jump_period / r.step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw ConfigError("InvalidValue", "regulator.step",
                          "step must divide regulator.jump_period exactly");
    if (!(cfg.duration > 0.0)) throw ConfigError("InvalidValue", "duration", "must be positive");
    if (!(r.kernel.signal_variance >= 0.0))
        throw ConfigError("InvalidValue", "gp.signal_variance", "must be nonnegative");
    for (double l : r.kernel.lengthscales)
        if (!(l > 0.0)) throw ConfigError("InvalidValue", "gp.lengthscale", "must be positive");
    if (!(r.kernel.noise_variance >= 0.0))
        throw ConfigError("InvalidValue", "gp.noise_variance", "must be nonnegative");
}

}  // namespace

ExperimentConfig example_config(int which) {
    ExperimentConfig cfg;
    switch (which) {
        case 1:
            cfg.plant = PlantKind::kLorenz;
            cfg.regulator.k_p = 500.0;
            cfg.regulator.rho_form = RhoForm::kQuadraticPlusOne;
            cfg.regulator.sat_limit = 100.0;
            cfg.regulator.n_eta = 10;
            cfg.regulator.kernel = {2500.0, {40.0}, 1e-4};
            cfg.plant_init = {2.0, -1.8, -1.5};
            cfg.w_init = {0.0, 4.0};
            cfg.duration = 40.0;
            cfg.oracle_overlay = true;
            break;
        case 2:
            cfg.plant = PlantKind::kExample2;
            cfg.regulator.k_p = 300.0;
            cfg.regulator.sat_limit = 25.0;
            cfg.regulator.n_eta = 6;
            cfg.regulator.kernel = {100.0, {5.0}, 1e-6};
            // The transient with e(0)=10 under k_p*rho(e) is stiff; explicit RK4
            // needs h*k_p*(3e^2+1) < 2.78, hence the small step.
            cfg.regulator.step = 2e-5;
            cfg.plant_init = {1.0, 10.0};
            cfg.w_init = {0.0, 4.0};
            cfg.duration = 10.0;
            break;
        case 3:
            cfg.plant = PlantKind::kBioreactor;
            cfg.regulator.k_p = 30.0;
            cfg.regulator.rho_form = RhoForm::kUnit;
            cfg.regulator.sat_limit = 45.0;
            cfg.regulator.n_eta = 6;
            cfg.regulator.kernel = {400.0, {40.0}, 1e-6};
            cfg.plant_init = {7.038, 2.404, 24.87};
            cfg.w_init = {0.0, 0.2};  // gamma(t) = gamma_xs + 0.2 sin(0.8 t)
            cfg.duration = 60.0;
            break;
        default:
            throw std::invalid_argument("example_config: expected 1, 2 or 3");
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("InvalidValue", line, "expected 'key = value'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    const auto plant_name = take("plant");
    if (!plant_name) throw ConfigError("MissingKey", "plant", "");
    int which;
    if (*plant_name == "lorenz") which = 1;
    else if (*plant_name == "example2") which = 2;
    else if (*plant_name == "bioreactor") which = 3;
    else throw ConfigError("InvalidValue", "plant", "expected lorenz|example2|bioreactor");

    ExperimentConfig cfg = example_config(which);

    if (auto v = take("duration")) cfg.duration = parse_number("duration", *v);
    if (auto v = take("seed")) cfg.seed = static_cast<unsigned>(parse_number("seed", *v));
    if (auto v = take("output")) cfg.output_path = *v;
    if (auto v = take("compare_im")) cfg.compare_im = parse_bool("compare_im", *v);
    if (auto v = take("oracle_overlay")) cfg.oracle_overlay = parse_bool("oracle_overlay", *v);

    RegulatorConfig& r = cfg.regulator;
    if (auto v = take("regulator.k_p")) r.k_p = parse_number("regulator.k_p", *v);
    if (auto v = take("regulator.rho")) {
        if (*v == "quadratic") r.rho_form = RhoForm::kQuadraticPlusOne;
        else if (*v == "unit") r.rho_form = RhoForm::kUnit;
        else throw ConfigError("InvalidValue", "regulator.rho", "expected quadratic|unit");
    }
    if (auto v = take("regulator.sat_limit")) r.sat_limit = parse_number("regulator.sat_limit", *v);
    if (auto v = take("regulator.jump_period"))
        r.jump_period = parse_number("regulator.jump_period", *v);
    if (auto v = take("regulator.window"))
        r.window = static_cast<std::size_t>(parse_number("regulator.window", *v));
    if (auto v = take("regulator.n_eta"))
        r.n_eta = static_cast<std::size_t>(parse_number("regulator.n_eta", *v));
    if (auto v = take("regulator.step")) r.step = parse_number("regulator.step", *v);
    if (auto v = take("regulator.eval_mode")) {
        if (*v == "continuous-gp") r.eval_mode = EvalMode::kContinuousGp;
        else if (*v == "zero-order-hold") r.eval_mode = EvalMode::kZeroOrderHold;
        else
            throw ConfigError("InvalidValue", "regulator.eval_mode",
                              "expected continuous-gp|zero-order-hold");
    }
    if (auto v = take("regulator.gp_enabled")) r.gp_enabled = parse_bool("regulator.gp_enabled", *v);
    if (auto v = take("regulator.optimize_hyperparameters"))
        r.optimize_hyperparameters = parse_bool("regulator.optimize_hyperparameters", *v);
    if (auto v = take("regulator.optimize_budget"))
        r.optimize_budget = static_cast<int>(parse_number("regulator.optimize_budget", *v));

    if (auto v = take("gp.signal_variance"))
        r.kernel.signal_variance = parse_number("gp.signal_variance", *v);
    if (auto v = take("gp.lengthscale")) r.kernel.lengthscales = parse_vector("gp.lengthscale", *v);
    if (auto v = take("gp.noise_variance"))
        r.kernel.noise_variance = parse_number("gp.noise_variance", *v);

    if (auto v = take("init.plant")) cfg.plant_init = parse_vector("init.plant", *v);
    if (auto v = take("init.w")) cfg.w_init = parse_vector("init.w", *v);

    if (auto v = take("lorenz.sigma")) cfg.lorenz.sigma_exo = parse_number("lorenz.sigma", *v);
    if (auto v = take("lorenz.a11")) cfg.lorenz.a11 = parse_number("lorenz.a11", *v);
    if (auto v = take("lorenz.a12")) cfg.lorenz.a12 = parse_number("lorenz.a12", *v);
    if (auto v = take("lorenz.a21")) cfg.lorenz.a21 = parse_number("lorenz.a21", *v);
    if (auto v = take("lorenz.a22")) cfg.lorenz.a22 = parse_number("lorenz.a22", *v);
    if (auto v = take("lorenz.a3")) cfg.lorenz.a3 = parse_number("lorenz.a3", *v);

    if (auto v = take("bioreactor.set_point"))
        cfg.bioreactor.set_point = parse_number("bioreactor.set_point", *v);
    if (auto v = take("bioreactor.a0")) cfg.bioreactor.a0 = parse_number("bioreactor.a0", *v);
    if (auto v = take("bioreactor.omega"))
        cfg.bioreactor.omega = parse_number("bioreactor.omega", *v);
    if (auto v = take("bioreactor.mu_m")) cfg.bioreactor.mu_m = parse_number("bioreactor.mu_m", *v);
    if (auto v = take("bioreactor.gamma_xs"))
        cfg.bioreactor.gamma_xs = parse_number("bioreactor.gamma_xs", *v);

    if (!kv.empty()) throw ConfigError("UnknownKey", kv.begin()->first, "");

    // keep the disturbance amplitude and the exosystem state consistent
    if (cfg.plant == PlantKind::kBioreactor && cfg.w_init == example_config(3).w_init)
        cfg.w_init = {0.0, cfg.bioreactor.a0};

    validate(cfg);
    const plants::PlantModel plant = make_plant(cfg);
    if (cfg.plant_init.size() != plant.n_state)
        throw ConfigError("InvalidValue", "init.plant", "wrong state dimension");
    if (cfg.w_init.size() != plant.n_w)
        throw ConfigError("InvalidValue", "init.w", "wrong exosystem dimension");
    return cfg;
}

plants::PlantModel make_plant(const ExperimentConfig& cfg) {
    switch (cfg.plant) {
        case PlantKind::kLorenz:
            return plants::make_lorenz_plant(cfg.lorenz);
        case PlantKind::kExample2:
            return plants::make_example2_plant();
        case PlantKind::kBioreactor:
            return plants::make_bioreactor_plant(cfg.bioreactor);
    }
    throw std::logic_error("make_plant: unreachable");
}

RunMetrics compute_metrics(const ExperimentConfig& cfg, const HybridTrajectory& traj) {
    RunMetrics m;
    m.jump_count = traj.jump_times.size();
    if (traj.samples.empty()) return m;
    m.final_abs_error = std::abs(traj.samples.back().e);

    const double duration = traj.samples.back().t;
    const double q3 = 0.75 * duration;
    double sq = 0.0;
    std::size_t count = 0;
    for (const auto& s : traj.samples) {
        if (s.t >= q3) {
            sq += s.e * s.e;
            ++count;
        }
    }
    m.rms_error_last_quarter = count ? std::sqrt(sq / double(count)) : 0.0;

    m.sup_error_windows.assign(10, 0.0);
    for (const auto& s : traj.samples) {
        auto seg = static_cast<std::size_t>(std::floor(10.0 * s.t / duration));
        if (seg >= 10) seg = 9;
        m.sup_error_windows[seg] = std::max(m.sup_error_windows[seg], std::abs(s.e));
    }

    if (cfg.plant == PlantKind::kLorenz) {
        double mse = 0.0;
        std::size_t n = 0;
        for (const auto& s : traj.samples) {
            if (s.t < q3) continue;
            const double d = s.gp_mean - plants::lorenz_ideal_feedforward(s.w, cfg.lorenz);
            mse += d * d;
            ++n;
        }
        if (n) m.gp_mse_vs_oracle = mse / double(n);
    }
    return m;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    const plants::PlantModel plant = make_plant(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    r.trajectory = simulate(plant, cfg.regulator, cfg.plant_init, cfg.w_init, cfg.duration);
    r.metrics = compute_metrics(cfg, r.trajectory);
    r.metrics.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void write_trajectory(const HybridTrajectory& traj, const plants::PlantModel& plant,
                      const std::string& path, bool oracle_overlay,
                      const plants::LorenzParams* lorenz) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("IoError: cannot open '" + path + "' for writing");

    std::string header = "t,j";
    for (const auto& n : plant.state_names) header += "," + n;
    header += ",w1,w2";
    const std::size_t n_eta = traj.samples.empty() ? 0 : traj.samples.front().eta.size();
    for (std::size_t i = 1; i <= n_eta; ++i) header += ",eta_" + std::to_string(i);
    header += ",e,u,gp_mean,gp_var";
    if (oracle_overlay) header += ",u_star";
    header += "\n";
    std::fputs(header.c_str(), f);

    for (const auto& s : traj.samples) {
        std::fprintf(f, "%.17g,%zu", s.t, s.j);
        for (double v : s.plant_state) std::fprintf(f, ",%.17g", v);
        for (double v : s.w) std::fprintf(f, ",%.17g", v);
        for (double v : s.eta) std::fprintf(f, ",%.17g", v);
        std::fprintf(f, ",%.17g,%.17g,%.17g,%.17g", s.e, s.u, s.gp_mean, s.gp_variance);
        if (oracle_overlay) {
            const double ustar =
                lorenz ? plants::lorenz_ideal_feedforward(s.w, *lorenz) : 0.0;
            std::fprintf(f, ",%.17g", ustar);
        }
        std::fputc('\n', f);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("IoError: close failed for '" + path + "'");
}

std::string metrics_to_json(const RunMetrics& m) {
    nlohmann::json j;
    j["final_abs_error"] = m.final_abs_error;
    j["rms_error_last_quarter"] = m.rms_error_last_quarter;
    j["sup_error_windows"] = m.sup_error_windows;
    j["jump_count"] = m.jump_count;
    if (m.gp_mse_vs_oracle) j["gp_mse_vs_oracle"] = *m.gp_mse_vs_oracle;
    return j.dump(2);
}

}  // namespace gpor
