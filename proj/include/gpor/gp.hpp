#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "gpor/linalg.hpp"

namespace gpor::gp {

struct EmptyDataset : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidDelta : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Squared-exponential kernel with one lengthscale per input dimension.
/// A single lengthscale broadcasts to all dimensions (isotropic mode).
struct Kernel {
    double signal_variance = 1.0;
    Vector lengthscales = {1.0};
    double noise_variance = 1e-6;
};

double kernel_eval(const Kernel& k, const Vector& x, const Vector& y);

struct Dataset {
    std::vector<Vector> inputs;
    Vector targets;

    std::size_t size() const { return inputs.size(); }
};

/// Immutable conditioned GP. Fit builds it; predictions never mutate it.
class GpModel {
public:
    static GpModel fit(const Dataset& data, const Kernel& k);

    double predict_mean(const Vector& x) const;
    double predict_variance(const Vector& x) const;
    double log_marginal_likelihood() const;

    const Kernel& kernel() const { return kernel_; }
    const Dataset& data() const { return data_; }
    const Vector& alpha() const { return alpha_; }
    const Matrix& chol() const { return chol_; }

    /// True when the jitter ladder had to escalate past the requested
    /// regularization (clustered or duplicated inputs).
    bool degenerate_gram() const { return degenerate_gram_; }

private:
    GpModel() = default;

    Kernel kernel_;
    Dataset data_;
    Matrix chol_;
    Vector alpha_;
    bool degenerate_gram_ = false;
};

struct OptimizeResult {
    Kernel kernel;
    double log_marginal_likelihood;
    bool budget_exhausted;
    int evaluations;
};

/// Direct (Nelder-Mead) maximum-likelihood search over log(sigma_f^2) and
/// log(lengthscales); noise variance stays frozen unless optimize_noise is set.
OptimizeResult optimize_hyperparameters(const Dataset& data, const Kernel& init, int budget,
                                        bool optimize_noise = false);

struct Box {
    Vector lo;
    Vector hi;
};

struct UniformErrorBound {
    double beta;
    double gamma;
    double lipschitz_mean;      // L_mu
    double lipschitz_variance;  // L_sigma^2
    double log_covering_number;
    std::function<double(const Vector&)> bound_at;
};

/// High-probability uniform bound |f(x) - mu(x)| <= sqrt(beta)*sigma(x) + gamma
/// on an axis-aligned box, via a grid covering of the box.
UniformErrorBound uniform_error_bound(const GpModel& g, const Box& domain, double delta,
                                      double rho, double lipschitz_f);

}  // namespace gpor::gp
