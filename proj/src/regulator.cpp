#include "gpor/regulator.hpp"

#include <algorithm>
#include <cmath>

#include "gpor/ode.hpp"

namespace gpor {

double rho_eval(RhoForm form, double e) {
    switch (form) {
        case RhoForm::kQuadraticPlusOne:
            return e * e + 1.0;
        case RhoForm::kUnit:
            return 1.0;
    }
    return 1.0;
}

ControlOutput control_law(double e, const Vector& eta, const gp::GpModel* model,
                          const RegulatorConfig& cfg) {
    const double feedback = -cfg.k_p * rho_eval(cfg.rho_form, e) * e;
    if (model == nullptr || !cfg.gp_enabled) {
        const double prior_var = cfg.gp_enabled ? cfg.kernel.signal_variance : 0.0;
        return {feedback, 0.0, prior_var};
    }
    const double mu = model->predict_mean(eta);
    const double var = model->predict_variance(eta);
    const double sat = cfg.sat_limit * std::clamp(mu / cfg.sat_limit, -1.0, 1.0);
    return {feedback + sat, mu, var};
}

namespace {

double clamp_input(double u, const plants::PlantModel& plant) {
    if (!plant.input_bounds) return u;
    return std::clamp(u, plant.input_bounds->first, plant.input_bounds->second);
}

/// Applied control at a given sub-state, respecting the evaluation mode.
double applied_control(const plants::PlantModel& plant, const RegulatorConfig& cfg,
                       const Vector& x, const Vector& w, const Vector& eta,
                       const gp::GpModel* model, double u_hat_frozen) {
    const double e = plant.error_map(x, w);
    double u;
    if (cfg.eval_mode == EvalMode::kContinuousGp) {
        u = control_law(e, eta, model, cfg).u;
    } else {
        const double feedback = -cfg.k_p * rho_eval(cfg.rho_form, e) * e;
        const double sat =
            cfg.sat_limit * std::clamp(u_hat_frozen / cfg.sat_limit, -1.0, 1.0);
        u = feedback + (cfg.gp_enabled && model != nullptr ? sat : 0.0);
    }
    return clamp_input(u, plant);
}

}  // namespace

void flow_step(HybridState& s, const plants::PlantModel& plant, const RegulatorConfig& cfg,
               double t) {
    const std::size_t np = plant.n_state;
    const std::size_t nw = plant.n_w;
    const std::size_t ne = cfg.n_eta;

    Vector x(np + nw + ne);
    std::copy(s.plant_state.begin(), s.plant_state.end(), x.begin());
    std::copy(s.w.begin(), s.w.end(), x.begin() + np);
    std::copy(s.eta.begin(), s.eta.end(), x.begin() + np + nw);

    const gp::GpModel* model = s.model.get();
    const double u_hat = s.u_hat;

    auto rhs = [&](double ts, const Vector& xs) {
        const Vector xp(xs.begin(), xs.begin() + np);
        const Vector w(xs.begin() + np, xs.begin() + np + nw);
        const Vector eta(xs.begin() + np + nw, xs.end());
        const double u = applied_control(plant, cfg, xp, w, eta, model, u_hat);

        const Vector dxp = plant.plant_rhs(xp, w, u, ts);
        const Vector dw = plant.exo_rhs(w, ts);

        Vector d(np + nw + ne);
        std::copy(dxp.begin(), dxp.end(), d.begin());
        std::copy(dw.begin(), dw.end(), d.begin() + np);
        for (std::size_t i = 0; i < ne; ++i) {
            double v = -eta[i];
            if (i + 1 < ne) v += eta[i + 1];
            d[np + nw + i] = v;
        }
        d[np + nw + ne - 1] += u;  // N = e_last
        return d;
    };

    const Vector next = rk4_step(rhs, t, x, cfg.step);
    s.plant_state.assign(next.begin(), next.begin() + np);
    s.w.assign(next.begin() + np, next.begin() + np + nw);
    s.eta.assign(next.begin() + np + nw, next.end());
    s.tau += cfg.step;
}

void jump(HybridState& s, const RegulatorConfig& cfg, double u_applied,
          std::vector<std::string>* diagnostics) {
    if (cfg.gp_enabled) {
        s.buffer.push(s.eta, u_applied);
        try {
            auto fitted =
                std::make_shared<gp::GpModel>(gp::GpModel::fit(s.buffer.as_dataset(), cfg.kernel));
            if (fitted->degenerate_gram() && diagnostics)
                diagnostics->push_back("DegenerateGram");
            s.model = std::move(fitted);
            s.u_hat = s.model->predict_mean(s.eta);
        } catch (const NotPositiveDefinite& err) {
            if (diagnostics)
                diagnostics->push_back(std::string("fit failed at jump: ") + err.what());
            // previous model retained
        }
    }
    s.tau = 0.0;
    ++s.jumps;
}

HybridTrajectory simulate(const plants::PlantModel& plant, const RegulatorConfig& cfg,
                          const Vector& plant_init, const Vector& w_init, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("simulate: duration must be positive");
    const double h = cfg.step;
    const double T = cfg.jump_period;
    const auto steps_per_interval = static_cast<std::size_t>(std::llround(T / h));
    if (std::abs(static_cast<double>(steps_per_interval) * h - T) > 1e-9)
        throw std::invalid_argument("simulate: step must divide the jump period exactly");

    HybridState s{.tau = 0.0,
                  .plant_state = plant_init,
                  .w = w_init,
                  .eta = Vector(cfg.n_eta, 0.0),
                  .u_hat = 0.0,
                  .model = nullptr,
                  .buffer = WindowBuffer(cfg.window, cfg.n_eta),
                  .jumps = 0};

    HybridTrajectory traj;
    const auto total_steps = static_cast<std::size_t>(std::llround(duration / h));
    traj.samples.reserve(total_steps + total_steps / steps_per_interval + 2);

    bool hyperparams_tuned = false;
    gp::Kernel kernel = cfg.kernel;
    RegulatorConfig live_cfg = cfg;  // kernel may be retuned at the first jump

    auto log_sample = [&](double t) {
        const double e = plant.error_map(s.plant_state, s.w);
        double u;
        double mean = 0.0;
        double var = cfg.gp_enabled ? kernel.signal_variance : 0.0;
        if (s.model) {
            mean = s.model->predict_mean(s.eta);
            var = s.model->predict_variance(s.eta);
        }
        if (cfg.eval_mode == EvalMode::kContinuousGp) {
            ControlOutput c = control_law(e, s.eta, s.model.get(), cfg);
            u = c.u;
        } else {
            const double feedback = -cfg.k_p * rho_eval(cfg.rho_form, e) * e;
            const double sat = cfg.sat_limit * std::clamp(s.u_hat / cfg.sat_limit, -1.0, 1.0);
            u = feedback + (cfg.gp_enabled && s.model ? sat : 0.0);
        }
        if (plant.input_bounds)
            u = std::clamp(u, plant.input_bounds->first, plant.input_bounds->second);
        traj.samples.push_back({t, s.jumps, s.plant_state, s.w, s.eta, e, u, mean, var});
        return u;
    };

    log_sample(0.0);

    for (std::size_t step = 1; step <= total_steps; ++step) {
        const double t_prev = static_cast<double>(step - 1) * h;
        const double t_now = static_cast<double>(step) * h;
        try {
            flow_step(s, plant, cfg, t_prev);
        } catch (const NonFiniteDerivative&) {
            throw NonFiniteState("simulate: non-finite derivative at t=" + std::to_string(t_now),
                                 std::move(traj));
        }
        if (!all_finite(s.plant_state) || !all_finite(s.w) || !all_finite(s.eta))
            throw NonFiniteState("simulate: non-finite state at t=" + std::to_string(t_now),
                                 std::move(traj));
        if (plant.name == "bioreactor") {
            for (double v : s.plant_state)
                if (v < -1e-9 &&
                    (traj.diagnostics.empty() || traj.diagnostics.back() != "NegativeState"))
                    traj.diagnostics.push_back("NegativeState");
        }

        const double u_now = log_sample(t_now);

        if (step % steps_per_interval == 0) {
            if (cfg.gp_enabled && cfg.optimize_hyperparameters && !hyperparams_tuned &&
                s.buffer.size() >= 1) {
                // retune once, at the first jump where at least 2 pairs exist
                WindowBuffer probe = s.buffer;
                probe.push(s.eta, u_now);
                if (probe.size() >= 2) {
                    kernel = gp::optimize_hyperparameters(probe.as_dataset(), kernel,
                                                          cfg.optimize_budget)
                                 .kernel;
                    live_cfg.kernel = kernel;
                    hyperparams_tuned = true;
                }
            }
            jump(s, live_cfg, u_now, &traj.diagnostics);
            traj.jump_times.push_back(t_now);
            log_sample(t_now);  // post-jump sample with incremented j
        }
    }
    return traj;
}

}  // namespace gpor
