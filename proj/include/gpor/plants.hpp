#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpor/linalg.hpp"

namespace gpor::plants {

struct SingularDenominator : std::domain_error {
    using std::domain_error::domain_error;
};

/// One benchmark plant: right-hand sides, exosystem, and the regulated error.
struct PlantModel {
    std::string name;
    std::vector<std::string> state_names;
    std::size_t n_state;
    std::size_t n_w;
    // (plant state, w, u, t) -> state derivative
    std::function<Vector(const Vector&, const Vector&, double, double)> plant_rhs;
    std::function<Vector(const Vector&, double)> exo_rhs;
    std::function<double(const Vector&, const Vector&)> error_map;
    std::optional<std::pair<double, double>> input_bounds;
};

// ---- Example 1: generalized Lorenz system -------------------------------

struct LorenzParams {
    double a11 = -10.0;
    double a12 = 10.0;
    double a21 = 28.0;
    double a22 = -1.0;
    double a3 = -2.6667;
    double sigma_exo = 0.8;  // exosystem frequency
    double b = 1.0;          // unit input gain
};

Vector lorenz_rhs(const Vector& state, const Vector& w, double u, const LorenzParams& p);
Vector harmonic_exo_rhs(const Vector& w, double sigma);

struct LorenzSteadyState {
    double z1;
    double z2;
    double y;
};

/// Closed-form r-coefficients of the Lorenz regulator-equation solution.
/// Derived from the defining linear systems; certified by regulator_residual.
struct LorenzCoefficients {
    double r11, r12;
    double r21, r22, r23;
    double r31, r32, r33, r34, r35, r36;
};

LorenzCoefficients lorenz_coefficients(const LorenzParams& p);
LorenzSteadyState lorenz_steady_state(const Vector& w, const LorenzParams& p);
double lorenz_ideal_feedforward(const Vector& w, const LorenzParams& p);

PlantModel make_lorenz_plant(const LorenzParams& p = {});

// ---- Example 2: nonlinear (Duffing) exosystem ---------------------------

Vector example2_rhs(const Vector& state, const Vector& w, double u);
Vector duffing_exo_rhs(const Vector& w);

PlantModel make_example2_plant();

// ---- Example 3: continuous bioreactor -----------------------------------

struct BioreactorParams {
    double gamma_xs = 0.4;  // nominal cell-mass yield, g/g
    double alpha = 2.2;     // g/g
    double beta = 0.2;      // 1/h
    double mu_m = 0.48;     // 1/h
    double p_m = 50.0;      // g/L
    double k_m = 1.2;       // g/L
    double k_i = 22.0;      // g/L
    double dilution = 0.15; // 1/h
    double s_f_nominal = 20.0;  // g/L
    double a0 = 0.2;        // yield disturbance amplitude
    double omega = 0.8;     // yield disturbance frequency, rad/h
    double set_point = 23.4;  // substrate set point S_p, g/L
};

double growth_rate(double s, double p, const BioreactorParams& params);
Vector bioreactor_rhs(const Vector& state, double u, double t, const BioreactorParams& params);

/// The yield disturbance is carried as a harmonic exosystem state with
/// w(0) = (0, a0), so gamma(t) = gamma_xs + w1(t) = gamma_xs + a0 sin(omega t).
PlantModel make_bioreactor_plant(const BioreactorParams& params = {});

// ---- Regulator-equation residual oracle ----------------------------------

struct SteadyMaps {
    // w -> full steady plant state (z*..., y*)
    std::function<Vector(const Vector&)> state;
    // w -> u*
    std::function<double(const Vector&)> feedforward;
};

/// Integrates the exosystem from w0 and compares the finite-difference time
/// derivative of the steady maps against the plant right-hand side evaluated
/// at (x*(w), w, u*(w)). Returns the maximum absolute mismatch. Independent
/// certification of the closed-form steady-state/feedforward formulas.
double regulator_residual(const PlantModel& plant, const SteadyMaps& maps, const Vector& w0,
                          double duration);

}  // namespace gpor::plants
