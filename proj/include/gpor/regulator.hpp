#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpor/gp.hpp"
#include "gpor/internal_model.hpp"
#include "gpor/plants.hpp"
#include "gpor/window.hpp"

namespace gpor {

enum class RhoForm {
    kQuadraticPlusOne,  // rho(e) = e^2 + 1
    kUnit,              // rho(e) = 1 (bioreactor law)
};

enum class EvalMode {
    kContinuousGp,   // mu(eta(t)) re-evaluated inside integrator stages
    kZeroOrderHold,  // GP term frozen at the value sampled at the last jump
};

struct RegulatorConfig {
    double k_p = 500.0;
    RhoForm rho_form = RhoForm::kQuadraticPlusOne;
    double sat_limit = 100.0;
    double jump_period = 0.1;
    std::size_t window = 10;
    std::size_t n_eta = 10;
    gp::Kernel kernel;
    double step = 1e-3;
    EvalMode eval_mode = EvalMode::kContinuousGp;
    bool gp_enabled = true;  // false: mu(eta) forced to zero (without-IM twin)
    bool optimize_hyperparameters = false;  // opt-in, first jump only
    int optimize_budget = 200;
};

struct ControlOutput {
    double u;
    double mean;
    double variance;
};

double rho_eval(RhoForm form, double e);

/// u = -k_p rho(e) e + sat_limit * clamp(mu(eta)/sat_limit, -1, 1).
/// With no model yet (first flow interval) the GP term is zero and the
/// reported variance is the prior variance.
ControlOutput control_law(double e, const Vector& eta, const gp::GpModel* model,
                          const RegulatorConfig& cfg);

struct TrajectorySample {
    double t;
    std::size_t j;
    Vector plant_state;
    Vector w;
    Vector eta;
    double e;
    double u;
    double gp_mean;
    double gp_variance;
};

struct HybridTrajectory {
    std::vector<TrajectorySample> samples;
    std::vector<double> jump_times;
    std::vector<std::string> diagnostics;  // degenerate Gram flags, negative states, ...
};

struct NonFiniteState : std::runtime_error {
    HybridTrajectory partial;
    NonFiniteState(std::string msg, HybridTrajectory traj)
        : std::runtime_error(std::move(msg)), partial(std::move(traj)) {}
};

struct HybridState {
    double tau = 0.0;
    Vector plant_state;
    Vector w;
    Vector eta;
    double u_hat = 0.0;  // frozen GP term (zero-order-hold mode)
    std::shared_ptr<const gp::GpModel> model;
    WindowBuffer buffer;
    std::size_t jumps = 0;
};

/// One RK4 step of the coupled flow {plant, exosystem, internal model}.
/// Requires tau + h <= jump_period (up to roundoff).
void flow_step(HybridState& s, const plants::PlantModel& plant, const RegulatorConfig& cfg,
               double t);

/// Jump map: record (eta(t_k), u(t_k)) into the window, refit the GP on the
/// buffer, freeze u_hat = mu(eta), reset the clock. Plant state, w, eta are
/// untouched. Fit failures leave the previous model in place and append a
/// diagnostic. u_applied is the control in effect at the jump instant; the
/// caller samples it because it depends on the plant's error map.
void jump(HybridState& s, const RegulatorConfig& cfg, double u_applied,
          std::vector<std::string>* diagnostics = nullptr);

HybridTrajectory simulate(const plants::PlantModel& plant, const RegulatorConfig& cfg,
                          const Vector& plant_init, const Vector& w_init, double duration);

}  // namespace gpor
