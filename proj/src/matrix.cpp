#include "pastegen/matrix.hpp"

#include <cmath>

#include "pastegen/error.hpp"

namespace pastegen {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::trace() const {
    double t = 0.0;
    const int n = rows_ < cols_ ? rows_ : cols_;
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

bool cholesky(const Matrix& a, Matrix* lower) {
    const int n = a.rows();
    Matrix L(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (int k = 0; k < j; ++k) sum -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(sum > 0.0)) return false;
                L(i, j) = std::sqrt(sum);
            } else {
                L(i, j) = sum / L(j, j);
            }
        }
    }
    *lower = std::move(L);
    return true;
}

std::vector<double> forward_solve(const Matrix& lower, const std::vector<double>& v) {
    const int n = lower.rows();
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double sum = v[i];
        for (int k = 0; k < i; ++k) sum -= lower(i, k) * y[k];
        y[i] = sum / lower(i, i);
    }
    return y;
}

Matrix cholesky_inverse(const Matrix& lower) {
    const int n = lower.rows();
    // Invert L in place (lower triangular), then form L^-T L^-1.
    Matrix inv_l(n, n);
    for (int i = 0; i < n; ++i) {
        inv_l(i, i) = 1.0 / lower(i, i);
        for (int j = 0; j < i; ++j) {
            double sum = 0.0;
            for (int k = j; k < i; ++k) sum -= lower(i, k) * inv_l(k, j);
            inv_l(i, j) = sum / lower(i, i);
        }
    }
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = 0.0;
            for (int k = i; k < n; ++k) sum += inv_l(k, i) * inv_l(k, j);
            out(i, j) = sum;
            out(j, i) = sum;
        }
    }
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) fail("matrix-shape", "matmul dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double av = a(i, k);
            for (int j = 0; j < b.cols(); ++j) out(i, j) += av * b(k, j);
        }
    return out;
}

} // namespace pastegen
