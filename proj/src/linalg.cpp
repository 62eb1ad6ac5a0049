#include "gpor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace gpor {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector Matrix::operator*(const Vector& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
    Vector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows()) throw DimensionMismatch("matrix-matrix size mismatch");
    Matrix out(rows_, rhs.cols());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

namespace {

bool try_cholesky(const Matrix& a, double jitter, Matrix& out) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j) + jitter;
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    out = std::move(l);
    return true;
}

}  // namespace

bool cholesky_succeeds(const Matrix& a, double jitter) {
    if (a.rows() != a.cols()) throw DimensionMismatch("cholesky_succeeds: matrix not square");
    Matrix scratch;
    return try_cholesky(a, jitter, scratch);
}

CholeskyResult cholesky_factor(const Matrix& a, double jitter) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw DimensionMismatch("cholesky_factor: matrix not square");
    if (jitter < 0.0) throw std::invalid_argument("cholesky_factor: negative jitter");

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    const double sym_tol = 1e-10 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > sym_tol)
                throw std::invalid_argument("cholesky_factor: matrix not symmetric");

    Matrix l;
    double j = jitter;
    constexpr double kJitterCap = 1e-4;
    while (true) {
        if (try_cholesky(a, j, l)) return {std::move(l), j};
        if (j >= kJitterCap) throw NotPositiveDefinite(j);
        j = (j == 0.0) ? 1e-12 : j * 10.0;
        if (j > kJitterCap) j = kJitterCap;
    }
}

Vector solve_cholesky(const Matrix& chol, const Vector& b) {
    const std::size_t n = chol.rows();
    if (b.size() != n) throw DimensionMismatch("solve_cholesky: rhs size mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= chol(i, k) * y[k];
        y[i] = s / chol(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= chol(k, ii) * x[k];
        x[ii] = s / chol(ii, ii);
    }
    return x;
}

namespace {

using cplx = std::complex<double>;
using CMat = std::vector<std::vector<cplx>>;

// Householder reduction to upper Hessenberg form (real arithmetic).
Matrix to_hessenberg(Matrix h) {
    const std::size_t n = h.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) nrm += h(i, k) * h(i, k);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        Vector v(n, 0.0);
        const double alpha = (h(k + 1, k) >= 0.0) ? -nrm : nrm;
        v[k + 1] = h(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        // H = I - 2 v v^T / (v^T v); apply from both sides.
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
    }
    return h;
}

// Eigenvalues of a 2x2 complex block.
std::pair<cplx, cplx> eig2(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

}  // namespace

double max_real_eigenvalue(const Matrix& a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw DimensionMismatch("max_real_eigenvalue: matrix not square");
    if (n == 0) throw std::invalid_argument("max_real_eigenvalue: empty matrix");

    const Matrix hess = to_hessenberg(a);
    CMat h(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h[i][j] = hess(i, j);

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(h[i][j]));
    if (scale == 0.0) return 0.0;
    const double tol = 1e-14 * scale;

    double max_re = -std::numeric_limits<double>::infinity();
    std::size_t hi = n - 1;  // active block is h[0..hi][0..hi]
    std::size_t iters = 0;
    const std::size_t budget = 200 * n + 200;

    while (true) {
        // deflate converged trailing eigenvalues
        while (true) {
            if (hi == 0) {
                max_re = std::max(max_re, h[0][0].real());
                return max_re;
            }
            if (std::abs(h[hi][hi - 1]) <= tol) {
                max_re = std::max(max_re, h[hi][hi].real());
                --hi;
                continue;
            }
            if (hi >= 1 && (hi == 1 || std::abs(h[hi - 1][hi - 2]) <= tol)) {
                // isolated 2x2 block: take both eigenvalues exactly
                auto [l1, l2] =
                    eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
                max_re = std::max({max_re, l1.real(), l2.real()});
                if (hi == 1) return max_re;
                hi -= 2;
                continue;
            }
            break;
        }

        if (++iters > budget) throw NoConvergence("max_real_eigenvalue: QR iteration budget exhausted");

        // Wilkinson shift: eigenvalue of trailing 2x2 closest to h[hi][hi]
        auto [l1, l2] = eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        cplx shift = (std::abs(l1 - h[hi][hi]) < std::abs(l2 - h[hi][hi])) ? l1 : l2;
        if (iters % 17 == 0) shift += cplx(0.0, tol * 1e3 * double(iters));  // stagnation kick

        // shifted QR sweep on the Hessenberg block via Givens rotations
        std::vector<cplx> cs(hi + 1), sn(hi + 1);
        for (std::size_t i = 0; i <= hi; ++i) h[i][i] -= shift;
        for (std::size_t k = 0; k < hi; ++k) {
            const cplx x = h[k][k];
            const cplx y = h[k + 1][k];
            const double r = std::sqrt(std::norm(x) + std::norm(y));
            if (r == 0.0) {
                cs[k] = 1.0;
                sn[k] = 0.0;
                continue;
            }
            cs[k] = x / r;
            sn[k] = y / r;
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx t1 = h[k][j];
                const cplx t2 = h[k + 1][j];
                h[k][j] = std::conj(cs[k]) * t1 + std::conj(sn[k]) * t2;
                h[k + 1][j] = -sn[k] * t1 + cs[k] * t2;
            }
        }
        for (std::size_t k = 0; k < hi; ++k) {
            const std::size_t top = 0;
            for (std::size_t i = top; i <= std::min(k + 2, hi); ++i) {
                const cplx t1 = h[i][k];
                const cplx t2 = h[i][k + 1];
                h[i][k] = t1 * cs[k] + t2 * sn[k];
                h[i][k + 1] = -t1 * std::conj(sn[k]) + t2 * std::conj(cs[k]);
            }
        }
        for (std::size_t i = 0; i <= hi; ++i) h[i][i] += shift;
    }
}

double min_singular_value(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m == 0 || n == 0) throw std::invalid_argument("min_singular_value: empty matrix");
    if (m < n) return min_singular_value(a.transposed());

    // one-sided Jacobi: orthogonalize the columns of a working copy
    std::vector<Vector> col(n, Vector(m));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) col[j][i] = a(i, j);

    const double eps = 1e-13;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double app = dot(col[p], col[p]);
                const double aqq = dot(col[q], col[q]);
                const double apq = dot(col[p], col[q]);
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double vp = col[p][i];
                    const double vq = col[q][i];
                    col[p][i] = c * vp - s * vq;
                    col[q][i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    double smin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) smin = std::min(smin, norm(col[j]));
    return smin;
}

double controllability_min_singular_value(const Matrix& m, const Vector& n) {
    const std::size_t d = m.rows();
    if (m.cols() != d) throw DimensionMismatch("controllability matrix: m not square");
    if (n.size() != d) throw DimensionMismatch("controllability matrix: n size mismatch");
    Matrix ctrb(d, d);
    Vector col = n;
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) ctrb(i, j) = col[i];
        col = m * col;
    }
    return min_singular_value(ctrb);
}

}  // namespace gpor
