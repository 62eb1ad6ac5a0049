#pragma once

#include <cmath>
#include <stdexcept>

#include "gpor/linalg.hpp"

namespace gpor {

struct NonFiniteDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
/// f must be callable as Vector(double, const Vector&).
template <typename F>
Vector rk4_step(F&& f, double t, const Vector& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step: step must be positive");

    auto stage = [&](double ts, const Vector& xs) {
        Vector d = f(ts, xs);
        if (d.size() != x.size()) throw DimensionMismatch("rk4_step: rhs dimension mismatch");
        if (!all_finite(d)) throw NonFiniteDerivative("rk4_step: non-finite derivative");
        return d;
    };

    const Vector k1 = stage(t, x);
    Vector xs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xs[i] = x[i] + 0.5 * h * k1[i];
    const Vector k2 = stage(t + 0.5 * h, xs);
    for (std::size_t i = 0; i < x.size(); ++i) xs[i] = x[i] + 0.5 * h * k2[i];
    const Vector k3 = stage(t + 0.5 * h, xs);
    for (std::size_t i = 0; i < x.size(); ++i) xs[i] = x[i] + h * k3[i];
    const Vector k4 = stage(t + h, xs);

    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace gpor
