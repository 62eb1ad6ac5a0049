#include "gpor/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gpor::gp {

namespace {

double lengthscale_for(const Kernel& k, std::size_t dim_index, std::size_t dim) {
    if (k.lengthscales.size() == 1) return k.lengthscales[0];
    if (k.lengthscales.size() != dim)
        throw DimensionMismatch("kernel: lengthscale count does not match input dimension");
    return k.lengthscales[dim_index];
}

}  // namespace

double kernel_eval(const Kernel& k, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("kernel_eval: input size mismatch");
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double l = lengthscale_for(k, i, x.size());
        const double d = (x[i] - y[i]) / l;
        q += d * d;
    }
    return k.signal_variance * std::exp(-0.5 * q);
}

GpModel GpModel::fit(const Dataset& data, const Kernel& k) {
    if (data.size() == 0) throw EmptyDataset("fit: empty dataset");
    if (data.inputs.size() != data.targets.size())
        throw DimensionMismatch("fit: inputs/targets length mismatch");
    const std::size_t dim = data.inputs.front().size();
    for (const auto& x : data.inputs)
        if (x.size() != dim) throw DimensionMismatch("fit: inconsistent input dimensions");

    const std::size_t n = data.size();
    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(k, data.inputs[i], data.inputs[j]);
            gram(i, j) = v;
            gram(j, i) = v;
        }
        gram(i, i) += k.noise_variance;
    }

    constexpr double kMinJitter = 1e-10;
    CholeskyResult chol = cholesky_factor(gram, kMinJitter);

    GpModel m;
    m.kernel_ = k;
    m.data_ = data;
    m.alpha_ = solve_cholesky(chol.factor, data.targets);
    // degenerate when the Gram matrix plus noise alone is not positive
    // definite, i.e. the factorization only succeeded thanks to the jitter
    m.degenerate_gram_ = chol.applied_jitter > kMinJitter || !cholesky_succeeds(gram, 0.0);
    m.chol_ = std::move(chol.factor);
    return m;
}

double GpModel::predict_mean(const Vector& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        s += kernel_eval(kernel_, x, data_.inputs[i]) * alpha_[i];
    return s;
}

double GpModel::predict_variance(const Vector& x) const {
    const std::size_t n = data_.size();
    Vector kstar(n);
    for (std::size_t i = 0; i < n; ++i) kstar[i] = kernel_eval(kernel_, x, data_.inputs[i]);
    // v = L^{-1} k*, variance = k(x,x) - v.v
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = kstar[i];
        for (std::size_t j = 0; j < i; ++j) s -= chol_(i, j) * v[j];
        v[i] = s / chol_(i, i);
    }
    const double var = kernel_.signal_variance - dot(v, v);
    return var < 0.0 ? 0.0 : var;
}

double GpModel::log_marginal_likelihood() const {
    const std::size_t n = data_.size();
    double logdet_half = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet_half += std::log(chol_(i, i));
    return -0.5 * dot(data_.targets, alpha_) - logdet_half -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

namespace {

double lml_or_neg_inf(const Dataset& data, const Kernel& k) {
    try {
        return GpModel::fit(data, k).log_marginal_likelihood();
    } catch (const NotPositiveDefinite&) {
        return -std::numeric_limits<double>::infinity();
    }
}

Kernel kernel_from_log_params(const Kernel& templ, const Vector& p, bool with_noise) {
    Kernel k = templ;
    k.signal_variance = std::exp(p[0]);
    for (std::size_t i = 0; i < k.lengthscales.size(); ++i) k.lengthscales[i] = std::exp(p[1 + i]);
    if (with_noise) k.noise_variance = std::exp(p.back());
    return k;
}

}  // namespace

OptimizeResult optimize_hyperparameters(const Dataset& data, const Kernel& init, int budget,
                                        bool optimize_noise) {
    const double init_lml = lml_or_neg_inf(data, init);
    if (budget <= 0) return {init, init_lml, true, 0};

    const std::size_t np = 1 + init.lengthscales.size() + (optimize_noise ? 1 : 0);
    Vector p0;
    p0.push_back(std::log(std::max(init.signal_variance, 1e-300)));
    for (double l : init.lengthscales) p0.push_back(std::log(l));
    if (optimize_noise) p0.push_back(std::log(std::max(init.noise_variance, 1e-300)));

    int evals = 0;
    auto objective = [&](const Vector& p) {  // minimized
        ++evals;
        return -lml_or_neg_inf(data, kernel_from_log_params(init, p, optimize_noise));
    };

    // Nelder-Mead with standard coefficients.
    std::vector<Vector> simplex(np + 1, p0);
    for (std::size_t i = 0; i < np; ++i) simplex[i + 1][i] += 0.5;
    std::vector<double> fv(np + 1);
    for (std::size_t i = 0; i <= np && evals < budget; ++i) fv[i] = objective(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(np + 1);
        for (std::size_t i = 0; i <= np; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<Vector> s2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex = std::move(s2);
        fv = std::move(f2);
    };

    while (evals < budget) {
        order();
        Vector centroid(np, 0.0);
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t d = 0; d < np; ++d) centroid[d] += simplex[i][d] / double(np);

        auto affine = [&](double coef) {
            Vector x(np);
            for (std::size_t d = 0; d < np; ++d)
                x[d] = centroid[d] + coef * (simplex[np][d] - centroid[d]);
            return x;
        };

        const Vector xr = affine(-1.0);
        const double fr = objective(xr);
        if (fr < fv[0]) {
            const Vector xe = affine(-2.0);
            const double fe = evals < budget ? objective(xe) : fr;
            if (fe < fr) {
                simplex[np] = xe;
                fv[np] = fe;
            } else {
                simplex[np] = xr;
                fv[np] = fr;
            }
        } else if (fr < fv[np - 1]) {
            simplex[np] = xr;
            fv[np] = fr;
        } else {
            const Vector xc = affine(0.5);
            const double fc = evals < budget ? objective(xc) : fr;
            if (fc < fv[np]) {
                simplex[np] = xc;
                fv[np] = fc;
            } else {
                for (std::size_t i = 1; i <= np; ++i) {
                    for (std::size_t d = 0; d < np; ++d)
                        simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                    if (evals < budget) fv[i] = objective(simplex[i]);
                }
            }
        }
    }
    order();

    const double best = -fv[0];
    if (best > init_lml)
        return {kernel_from_log_params(init, simplex[0], optimize_noise), best, evals >= budget,
                evals};
    return {init, init_lml, evals >= budget, evals};
}

UniformErrorBound uniform_error_bound(const GpModel& g, const Box& domain, double delta,
                                      double rho, double lipschitz_f) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidDelta("uniform_error_bound: delta not in (0,1)");
    if (!(rho > 0.0)) throw std::invalid_argument("uniform_error_bound: rho must be positive");
    if (domain.lo.size() != domain.hi.size())
        throw DimensionMismatch("uniform_error_bound: box bounds size mismatch");

    const std::size_t d = domain.lo.size();
    const Kernel& k = g.kernel();

    // SE-kernel Lipschitz constant: max gradient norm sigma_f^2 e^{-1/2} / l_min.
    double lmin = k.lengthscales[0];
    for (double l : k.lengthscales) lmin = std::min(lmin, l);
    const double lip_k = k.signal_variance * std::exp(-0.5) / lmin;

    const std::size_t r = g.data().size();
    const double lip_mu = lip_k * std::sqrt(double(r)) * norm(g.alpha());

    // ||(K + sigma_n^2 I)^{-1}|| = 1 / lambda_min, via the Cholesky factor's
    // smallest singular value (lambda_min = smin(L)^2).
    const double smin_l = min_singular_value(g.chol());
    const double inv_norm = 1.0 / (smin_l * smin_l);
    const double lip_var =
        2.0 * rho * lip_k * (1.0 + double(r) * inv_norm * k.signal_variance);

    // grid covering: prod_i ceil(side_i * sqrt(d) / (2 rho)), at least one cell per axis
    double log_m = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double side = domain.hi[i] - domain.lo[i];
        if (side < 0.0) throw std::invalid_argument("uniform_error_bound: box with hi < lo");
        const double cells = std::max(1.0, std::ceil(side * std::sqrt(double(d)) / (2.0 * rho)));
        log_m += std::log(cells);
    }

    const double beta = 2.0 * (log_m - std::log(delta));
    const double gamma = (lip_mu + lipschitz_f) * rho + std::sqrt(beta) * lip_var * rho;

    UniformErrorBound out;
    out.beta = beta;
    out.gamma = gamma;
    out.lipschitz_mean = lip_mu;
    out.lipschitz_variance = lip_var;
    out.log_covering_number = log_m;
    out.bound_at = [g, beta, gamma](const Vector& x) {
        return std::sqrt(beta) * std::sqrt(g.predict_variance(x)) + gamma;
    };
    return out;
}

}  // namespace gpor::gp
