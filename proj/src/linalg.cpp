#include "wavecert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavecert {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d)
{
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::frobenius_norm() const
{
    double s = 0.0;
    for (double v : data_)
        s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs() const
{
    double m = 0.0;
    for (double v : data_)
        m = std::max(m, std::abs(v));
    return m;
}

double Matrix::asymmetry() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
}

Matrix Matrix::symmetrized() const
{
    Matrix s(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        s(i, i) = (*this)(i, i);
        for (std::size_t j = i + 1; j < n_; ++j) {
            double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    Matrix r(*this);
    for (std::size_t i = 0; i < data_.size(); ++i)
        r.data_[i] += o.data_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    Matrix r(*this);
    for (std::size_t i = 0; i < data_.size(); ++i)
        r.data_[i] -= o.data_[i];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            double a = (*this)(i, k);
            for (std::size_t j = 0; j < n_; ++j)
                r(i, j) += a * o(k, j);
        }
    return r;
}

Matrix Matrix::operator*(double s) const
{
    Matrix r(*this);
    for (double& v : r.data_)
        v *= s;
    return r;
}

std::vector<double> jacobi_eigenvalues(const Matrix& input, double tol, int max_sweeps)
{
    const std::size_t n = input.size();
    Matrix a = input.symmetrized();
    double norm = a.frobenius_norm();
    double threshold = norm > 0.0 ? tol * norm : tol;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p);
                    double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k);
                    double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::optional<Matrix> cholesky(const Matrix& a)
{
    const std::size_t n = a.size();
    Matrix l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k)
            d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            return std::nullopt;
        double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

namespace {

double lu_determinant(std::vector<double> m, std::size_t n)
{
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c]))
                piv = r;
        if (m[piv * n + c] == 0.0)
            return 0.0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k)
                std::swap(m[c * n + k], m[piv * n + k]);
            det = -det;
        }
        double p = m[c * n + c];
        det *= p;
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = m[r * n + c] / p;
            for (std::size_t k = c; k < n; ++k)
                m[r * n + k] -= f * m[c * n + k];
        }
    }
    return det;
}

} // namespace

std::vector<double> leading_minors(const Matrix& a)
{
    const std::size_t n = a.size();
    std::vector<double> minors;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<double> block(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                block[i * k + j] = a(i, j);
        minors.push_back(lu_determinant(std::move(block), k));
    }
    return minors;
}

double determinant(const Matrix& a)
{
    const std::size_t n = a.size();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i * n + j] = a(i, j);
    return lu_determinant(std::move(m), n);
}

std::optional<double> min_generalized_eigenvalue(const Matrix& s, const Matrix& a)
{
    auto l = cholesky(a);
    if (!l)
        return std::nullopt;
    const std::size_t n = a.size();
    // Y = L^{-1} S by forward substitution on each column, then
    // C = L^{-1} Y^T (= L^{-1} S L^{-T} since S is symmetric).
    auto forward = [&](const Matrix& rhs) {
        Matrix y(n);
        for (std::size_t col = 0; col < n; ++col) {
            for (std::size_t i = 0; i < n; ++i) {
                double v = rhs(i, col);
                for (std::size_t k = 0; k < i; ++k)
                    v -= (*l)(i, k) * y(k, col);
                y(i, col) = v / (*l)(i, i);
            }
        }
        return y;
    };
    Matrix y = forward(s.symmetrized());
    Matrix c = forward(y.transpose());
    return jacobi_eigenvalues(c).front();
}

} // namespace wavecert
