#include "gpor/plants.hpp"

#include <cmath>

#include "gpor/ode.hpp"

namespace gpor::plants {

Vector lorenz_rhs(const Vector& state, const Vector& w, double u, const LorenzParams& p) {
    (void)w;
    const double z1 = state[0];
    const double z2 = state[1];
    const double y = state[2];
    return {p.a11 * z1 + p.a12 * y,
            p.a3 * z2 + z1 * y,
            z1 * (p.a21 - z2) + p.a22 * y + p.b * u};
}

Vector harmonic_exo_rhs(const Vector& w, double sigma) {
    if (w.size() != 2) throw DimensionMismatch("harmonic_exo_rhs: w must be 2-dimensional");
    return {sigma * w[1], -sigma * w[0]};
}

LorenzCoefficients lorenz_coefficients(const LorenzParams& p) {
    const double s = p.sigma_exo;
    const double a3 = p.a3;

    const double den1 = s * s + p.a11 * p.a11;
    const double den2 = a3 * (a3 * a3 + 4.0 * s * s);
    if (den1 == 0.0 || den2 == 0.0 || p.b == 0.0)
        throw SingularDenominator("lorenz_coefficients: singular denominator");

    LorenzCoefficients c{};
    // z1-equation: z1* = r11 w1 + r12 w2 solves d/dt z1* = a11 z1* + a12 w1.
    c.r11 = -p.a11 * p.a12 / den1;
    c.r12 = -p.a12 * s / den1;
    // z2-equation: z2* = r21 w1^2 + r22 w2^2 + r23 w1 w2 solves
    // d/dt z2* = a3 z2* + z1* w1.
    c.r23 = -(a3 * c.r12 + 2.0 * s * c.r11) / (4.0 * s * s + a3 * a3);
    c.r22 = s * c.r23 / a3;
    c.r21 = -(a3 * a3 * c.r11 - a3 * s * c.r12 + 2.0 * s * s * c.r11) / den2;
    // y-equation balance gives the feedforward polynomial.
    const double binv = 1.0 / p.b;
    c.r31 = -binv * (p.a22 + p.a21 * c.r11);
    c.r32 = binv * (s - p.a21 * c.r12);
    c.r33 = binv * c.r11 * c.r21;
    c.r34 = binv * c.r12 * c.r22;
    c.r35 = binv * (c.r12 * c.r21 + c.r11 * c.r23);
    c.r36 = binv * (c.r11 * c.r22 + c.r12 * c.r23);
    return c;
}

LorenzSteadyState lorenz_steady_state(const Vector& w, const LorenzParams& p) {
    if (w.size() != 2) throw DimensionMismatch("lorenz_steady_state: w must be 2-dimensional");
    const LorenzCoefficients c = lorenz_coefficients(p);
    const double w1 = w[0];
    const double w2 = w[1];
    LorenzSteadyState s{};
    s.y = w1;
    s.z1 = c.r11 * w1 + c.r12 * w2;
    s.z2 = c.r21 * w1 * w1 + c.r22 * w2 * w2 + c.r23 * w1 * w2;
    return s;
}

double lorenz_ideal_feedforward(const Vector& w, const LorenzParams& p) {
    if (w.size() != 2) throw DimensionMismatch("lorenz_ideal_feedforward: w must be 2-dimensional");
    const LorenzCoefficients c = lorenz_coefficients(p);
    const double w1 = w[0];
    const double w2 = w[1];
    return c.r31 * w1 + c.r32 * w2 + c.r33 * w1 * w1 * w1 + c.r34 * w2 * w2 * w2 +
           c.r35 * w1 * w1 * w2 + c.r36 * w1 * w2 * w2;
}

PlantModel make_lorenz_plant(const LorenzParams& p) {
    PlantModel m;
    m.name = "lorenz";
    m.state_names = {"z1", "z2", "y"};
    m.n_state = 3;
    m.n_w = 2;
    m.plant_rhs = [p](const Vector& x, const Vector& w, double u, double) {
        return lorenz_rhs(x, w, u, p);
    };
    m.exo_rhs = [p](const Vector& w, double) { return harmonic_exo_rhs(w, p.sigma_exo); };
    m.error_map = [](const Vector& x, const Vector& w) { return x[2] - w[0]; };
    return m;
}

Vector example2_rhs(const Vector& state, const Vector& w, double u) {
    if (w.size() != 2) throw DimensionMismatch("example2_rhs: w must be 2-dimensional");
    const double z = state[0];
    const double y = state[1];
    return {-2.0 * z + y + 2.0 * w[0], w[1] * w[1] + z * y + u};
}

Vector duffing_exo_rhs(const Vector& w) {
    if (w.size() != 2) throw DimensionMismatch("duffing_exo_rhs: w must be 2-dimensional");
    return {w[1], -w[0] - w[0] * w[0] * w[0]};
}

PlantModel make_example2_plant() {
    PlantModel m;
    m.name = "example2";
    m.state_names = {"z", "y"};
    m.n_state = 2;
    m.n_w = 2;
    m.plant_rhs = [](const Vector& x, const Vector& w, double u, double) {
        return example2_rhs(x, w, u);
    };
    m.exo_rhs = [](const Vector& w, double) { return duffing_exo_rhs(w); };
    m.error_map = [](const Vector& x, const Vector& w) { return x[1] - w[0]; };
    return m;
}

double growth_rate(double s, double p, const BioreactorParams& params) {
    return params.mu_m * (1.0 - p / params.p_m) * s / (params.k_m + s + s * s / params.k_i);
}

Vector bioreactor_rhs(const Vector& state, double u, double t, const BioreactorParams& params) {
    const double x = state[0];
    const double s = state[1];
    const double p = state[2];
    const double mu = growth_rate(s, p, params);
    const double gamma = params.gamma_xs + params.a0 * std::sin(params.omega * t);
    return {-params.dilution * x + mu * x,
            params.dilution * (u - s) - mu * x / gamma,
            -params.dilution * p + (params.alpha * mu + params.beta) * x};
}

PlantModel make_bioreactor_plant(const BioreactorParams& params) {
    PlantModel m;
    m.name = "bioreactor";
    m.state_names = {"X", "S", "P"};
    m.n_state = 3;
    m.n_w = 2;
    m.plant_rhs = [params](const Vector& x, const Vector& w, double u, double) {
        // disturbance enters through the exosystem state: gamma = gamma_xs + w1
        BioreactorParams p = params;
        const double mu = growth_rate(x[1], x[2], p);
        const double gamma = p.gamma_xs + w[0];
        return Vector{-p.dilution * x[0] + mu * x[0],
                      p.dilution * (u - x[1]) - mu * x[0] / gamma,
                      -p.dilution * x[2] + (p.alpha * mu + p.beta) * x[0]};
    };
    m.exo_rhs = [params](const Vector& w, double) { return harmonic_exo_rhs(w, params.omega); };
    m.error_map = [params](const Vector& x, const Vector&) { return x[1] - params.set_point; };
    m.input_bounds = std::make_pair(0.0, 45.0);
    return m;
}

double regulator_residual(const PlantModel& plant, const SteadyMaps& maps, const Vector& w0,
                          double duration) {
    const double h = 1e-3;
    const double fd_step = 1e-5;

    auto exo = [&](double t, const Vector& w) { return plant.exo_rhs(w, t); };

    // advances w by dt (|dt| small) with a single RK4 step
    auto advance = [&](const Vector& w, double t, double dt) {
        if (dt > 0.0) return rk4_step(exo, t, w, dt);
        auto back = [&](double tt, const Vector& ww) {
            Vector d = plant.exo_rhs(ww, tt);
            for (double& v : d) v = -v;
            return d;
        };
        return rk4_step(back, t, w, -dt);
    };

    Vector w = w0;
    double max_residual = 0.0;
    const std::size_t steps = static_cast<std::size_t>(std::llround(duration / h));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * h;

        const Vector w_plus = advance(w, t, fd_step);
        const Vector w_minus = advance(w, t, -fd_step);
        const Vector x_plus = maps.state(w_plus);
        const Vector x_minus = maps.state(w_minus);
        const Vector x_now = maps.state(w);
        const double u_star = maps.feedforward(w);
        const Vector f = plant.plant_rhs(x_now, w, u_star, t);

        for (std::size_t i = 0; i < x_now.size(); ++i) {
            const double dxdt = (x_plus[i] - x_minus[i]) / (2.0 * fd_step);
            max_residual = std::max(max_residual, std::abs(dxdt - f[i]));
        }

        if (k < steps) w = rk4_step(exo, t, w, h);
    }
    return max_residual;
}

}  // namespace gpor::plants
