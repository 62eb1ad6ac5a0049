#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gpor/linalg.hpp"

namespace gpor {

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonPositiveB : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Linear internal-model pair (M, N): M Hurwitz, (M, N) controllable.
struct InternalModel {
    std::size_t dim;
    Matrix m;
    Vector n;
};

/// Integrator chain: -1 on the diagonal, +1 on the full superdiagonal,
/// forced through the last state.
InternalModel build_chain(std::size_t n_eta);

/// Integrates eta*' = M eta* + N u*(t) from eta*(0) = 0. The Hurwitz
/// transient decays, so post-transient samples approximate the ideal
/// steady-state internal-model trajectory.
std::vector<std::pair<double, Vector>> ideal_eta_trajectory(
    const InternalModel& im, const std::function<double(double)>& u_star, double duration,
    double h);

/// eta_bar = eta - eta* - N e / b.
Vector error_coordinates(const Vector& eta, const Vector& eta_star, double e, double b,
                         const Vector& n);

}  // namespace gpor
