#include "gpor/internal_model.hpp"

#include <cmath>

#include "gpor/ode.hpp"

namespace gpor {

InternalModel build_chain(std::size_t n_eta) {
    if (n_eta == 0) throw InvalidDimension("build_chain: dimension must be at least 1");
    Matrix m(n_eta, n_eta);
    for (std::size_t i = 0; i < n_eta; ++i) {
        m(i, i) = -1.0;
        if (i + 1 < n_eta) m(i, i + 1) = 1.0;
    }
    Vector n(n_eta, 0.0);
    n[n_eta - 1] = 1.0;
    return {n_eta, std::move(m), std::move(n)};
}

std::vector<std::pair<double, Vector>> ideal_eta_trajectory(
    const InternalModel& im, const std::function<double(double)>& u_star, double duration,
    double h) {
    auto rhs = [&](double t, const Vector& eta) {
        Vector d = im.m * eta;
        const double u = u_star(t);
        for (std::size_t i = 0; i < im.dim; ++i) d[i] += im.n[i] * u;
        return d;
    };

    std::vector<std::pair<double, Vector>> out;
    const std::size_t steps = static_cast<std::size_t>(std::llround(duration / h));
    out.reserve(steps + 1);
    Vector eta(im.dim, 0.0);
    out.emplace_back(0.0, eta);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        eta = rk4_step(rhs, t, eta, h);
        out.emplace_back(static_cast<double>(k + 1) * h, eta);
    }
    return out;
}

Vector error_coordinates(const Vector& eta, const Vector& eta_star, double e, double b,
                         const Vector& n) {
    if (!(b > 0.0)) throw NonPositiveB("error_coordinates: input gain b must be positive");
    if (eta.size() != eta_star.size() || eta.size() != n.size())
        throw DimensionMismatch("error_coordinates: dimension mismatch");
    Vector out(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) out[i] = eta[i] - eta_star[i] - n[i] * e / b;
    return out;
}

}  // namespace gpor
