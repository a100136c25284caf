#pragma once

#include <vector>

namespace pastegen {

// Small row-major dense matrix; just enough linear algebra for fitting and
// scoring Gaussians at embedding dimensions (Cholesky route throughout).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double trace() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Lower-triangular factor of a symmetric positive-definite matrix; returns
// false if a pivot is not strictly positive.
bool cholesky(const Matrix& a, Matrix* lower);

// Solves L y = v for lower-triangular L.
std::vector<double> forward_solve(const Matrix& lower, const std::vector<double>& v);

// (L L^T)^-1, symmetric by construction.
Matrix cholesky_inverse(const Matrix& lower);

Matrix matmul(const Matrix& a, const Matrix& b);

} // namespace pastegen
