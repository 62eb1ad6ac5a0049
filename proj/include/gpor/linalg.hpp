#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpor {

using Vector = std::vector<double>;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotPositiveDefinite : std::runtime_error {
    double attempted_jitter;
    explicit NotPositiveDefinite(double jitter)
        : std::runtime_error("matrix not positive definite (last jitter tried: " +
                             std::to_string(jitter) + ")"),
          attempted_jitter(jitter) {}
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix. Small sizes only (internal models, Gram matrices).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix transposed() const;
    Vector operator*(const Vector& v) const;
    Matrix operator*(const Matrix& rhs) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double norm(const Vector& v);
double dot(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);

/// Lower-triangular Cholesky factor of a + jitter*I.
/// If the factorization fails, the jitter is escalated by factors of 10
/// (up to 1e-4) before NotPositiveDefinite is raised. Gram matrices built
/// from noise-free trajectory data are routinely near-singular, hence the
/// ladder.
struct CholeskyResult {
    Matrix factor;
    double applied_jitter;  // the jitter that actually succeeded
};

CholeskyResult cholesky_factor(const Matrix& a, double jitter);

/// Single factorization attempt with exactly the given jitter — no ladder.
/// Used to probe whether a Gram matrix is positive definite on its own.
bool cholesky_succeeds(const Matrix& a, double jitter);

/// Solves (L*L^T) x = b given the lower-triangular factor L.
Vector solve_cholesky(const Matrix& chol, const Vector& b);

/// Largest real part among the eigenvalues of a square matrix.
/// Hessenberg reduction followed by shifted complex QR iteration.
double max_real_eigenvalue(const Matrix& a);

/// Smallest singular value, computed by one-sided Jacobi orthogonalization.
double min_singular_value(const Matrix& a);

/// Smallest singular value of the controllability matrix [n, m n, ..., m^{d-1} n].
double controllability_min_singular_value(const Matrix& m, const Vector& n);

}  // namespace gpor
