#pragma once

// Small dense matrices (n <= 8 expected): cyclic Jacobi eigenvalues,
// Cholesky factorization and leading principal minors.

#include <cstddef>
#include <optional>
#include <vector>

namespace wavecert {

class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    Matrix transpose() const;
    double frobenius_norm() const;
    double max_abs() const;
    /// max |a_ij - a_ji|
    double asymmetry() const;
    /// (A + A^T) / 2
    Matrix symmetrized() const;

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(double s) const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Eigenvalues of a symmetric matrix in ascending order. Cyclic Jacobi
/// sweeps run until the off-diagonal Frobenius norm is below
/// tol * ||A||_F (absolute when ||A||_F == 0).
std::vector<double> jacobi_eigenvalues(const Matrix& a, double tol = 1e-12, int max_sweeps = 100);

/// Lower-triangular L with A = L L^T, or nullopt when a pivot is not
/// strictly positive.
std::optional<Matrix> cholesky(const Matrix& a);

/// det of the leading k x k block for k = 1..n, each by LU with partial
/// pivoting.
std::vector<double> leading_minors(const Matrix& a);

double determinant(const Matrix& a);

/// Smallest eigenvalue of the symmetric pencil (S, A) with A positive
/// definite: eigenvalues of L^{-1} S L^{-T} where A = L L^T.
/// Returns nullopt when A is not positive definite.
std::optional<double> min_generalized_eigenvalue(const Matrix& s, const Matrix& a);

} // namespace wavecert
