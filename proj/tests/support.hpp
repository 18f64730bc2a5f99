#pragma once

// Helpers shared by the test binaries: a seeded generator, independent
// numerical oracles and comparison helpers.

#include "wavecert/coeff.hpp"
#include "wavecert/domain.hpp"
#include "wavecert/expr.hpp"
#include "wavecert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace testing {

using wavecert::ConstantTable;
using wavecert::Expression;
using wavecert::Matrix;
using wavecert::Point;
using wavecert::Region;

class Rng {
public:
    explicit Rng(unsigned long long seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    Point in_box(const std::vector<wavecert::Interval>& box)
    {
        Point p;
        for (const auto& axis : box)
            p.push_back(uniform(axis.lo, axis.hi));
        return p;
    }

    /// Rejection sample of a point strictly inside the region, at least
    /// `inset` away from each constraint's zero set.
    Point in_region(const Region& r, double inset = 0.0)
    {
        for (;;) {
            Point p = in_box(r.box());
            if (r.contains(p) && r.constraint_value(p) <= -inset)
                return p;
        }
    }

private:
    std::mt19937_64 engine_;
};

inline double central_difference(const Expression& e, Point p, int axis, const ConstantTable& consts,
                                 double h = 1e-6)
{
    const double x = p[static_cast<std::size_t>(axis)];
    p[static_cast<std::size_t>(axis)] = x + h;
    const double up = e.evaluate(p, consts);
    p[static_cast<std::size_t>(axis)] = x - h;
    const double down = e.evaluate(p, consts);
    return (up - down) / (2.0 * h);
}

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double rel_frobenius(const Matrix& a, const Matrix& b)
{
    const double scale = std::max(a.frobenius_norm(), b.frobenius_norm());
    const double diff = (a - b).frobenius_norm();
    return scale == 0.0 ? diff : diff / scale;
}

/// Random orthogonal matrix by modified Gram-Schmidt on uniform columns.
inline Matrix random_orthogonal(std::size_t n, Rng& rng)
{
    Matrix q(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            q(i, k) = rng.uniform(-1.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < k; ++m) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                dot += q(i, k) * q(i, m);
            for (std::size_t i = 0; i < n; ++i)
                q(i, k) -= dot * q(i, m);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            norm += q(i, k) * q(i, k);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i)
            q(i, k) /= norm;
    }
    return q;
}

/// Q diag(spectrum) Q^T for a random orthogonal Q.
inline Matrix with_spectrum(const std::vector<double>& spectrum, Rng& rng)
{
    const std::size_t n = spectrum.size();
    Matrix q = random_orthogonal(n, rng);
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += q(i, k) * spectrum[k] * q(j, k);
            out(i, j) = s;
        }
    return out.symmetrized();
}

} // namespace testing

namespace testing {

struct CorpusEntry {
    const char* text;
    int dim;
    ConstantTable consts;
    std::vector<wavecert::Interval> box; // sampling box, clear of domain-error boundaries
};

/// Every coefficient, weight and constraint used by the bundled examples,
/// plus a few expressions exercising the remaining grammar.
inline const std::vector<CorpusEntry>& expression_corpus()
{
    static const std::vector<CorpusEntry> corpus = {
        {"1 + x1^2 + x2^2", 2, {}, {{-1.4, 1.4}, {-1.4, 1.4}}},
        {"(x1^2 + x2^2)/2", 2, {}, {{-1.4, 1.4}, {-1.4, 1.4}}},
        {"x1^2 + x2^2 - 2", 2, {}, {{-1.4, 1.4}, {-1.4, 1.4}}},
        {"(x1 - 2)^2 + x2^2 - 1", 2, {}, {{1, 3}, {-1, 1}}},
        {"(x1 - 2)^2 + x2^2 - 1.5", 2, {}, {{0.8, 3.2}, {-1.2, 1.2}}},
        {"(x1 - 2)^2 + (x2 - 2)^2 - 1", 2, {}, {{1, 3}, {1, 3}}},
        {"exp(x1 + x2)", 2, {}, {{1, 3}, {-1, 1}}},
        {"exp(x1^3 + x2^3)", 2, {}, {{1, 3}, {1, 3}}},
        {"exp(mu1*x1)", 2, {{"mu1", 0.5}}, {{0.8, 3.2}, {-1.2, 1.2}}},
        {"exp(-mu2*x1^2)", 2, {{"mu2", 0.1}}, {{0.8, 3.2}, {-1.2, 1.2}}},
        {"exp((-2)*(x1 - 5)) + exp((-2)*x2)", 2, {}, {{1, 3}, {-1, 1}}},
        {"exp(1.5*(2 + x1)) + exp(1.5*x2)", 2, {}, {{-1, 1}, {-1, 1}}},
        {"sqrt(1 + x1^2)*log(2 + x2)", 2, {}, {{-1, 1}, {-1, 1}}},
        {"sin(x1)*cos(x2)/(2 + x1)", 2, {}, {{-1, 1}, {-1, 1}}},
        {"x1^2.5 + x2^(-2)", 2, {}, {{0.5, 2}, {0.5, 2}}},
        {"x1*x2*x3 - x3^3/(1 + x1^2)", 3, {}, {{-1, 1}, {-1, 1}, {-1, 1}}},
        {"exp(x1)*(1 + x1)", 1, {}, {{-1, 1}}},
    };
    return corpus;
}

} // namespace testing

namespace testing {

/// Random smooth weight: exp(a.x) + b |x - p|^2 + c sin(x1) x_n with
/// coefficients drawn from modest ranges.
inline Expression random_weight(Rng& rng, int dim)
{
    using wavecert::Expression;
    Expression lin = Expression::number(0.0, dim);
    Expression quad = Expression::number(0.0, dim);
    for (int k = 0; k < dim; ++k) {
        Expression x = Expression::variable(k, dim);
        lin = lin + Expression::number(rng.uniform(-1.5, 1.5), dim) * x;
        quad = quad + pow(x - Expression::number(rng.uniform(-2, 2), dim), 2);
    }
    Expression x1 = Expression::variable(0, dim);
    Expression xn = Expression::variable(dim - 1, dim);
    return exp(lin) + Expression::number(rng.uniform(0.1, 2), dim) * quad +
           Expression::number(rng.uniform(-1, 1), dim) * sin(x1) * xn;
}

/// Random symmetric full field that stays positive definite on [-3, 3]^dim:
/// a dominant diagonal plus small smooth off-diagonal entries.
inline wavecert::CoefficientField random_full_field(Rng& rng, int dim)
{
    std::vector<std::string> entries;
    char buf[160];
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            if (i == j)
                std::snprintf(buf, sizeof buf, "%.6f + %.6f*x%d^2 + exp(%.6f*x%d)", 3.0 + rng.uniform(0, 2),
                              rng.uniform(0, 0.5), i + 1, rng.uniform(-0.3, 0.3), (i + 1) % dim + 1);
            else
                std::snprintf(buf, sizeof buf, "%.6f*sin(x%d + %.6f*x%d)", rng.uniform(-0.3, 0.3), i + 1,
                              rng.uniform(-1, 1), j + 1);
            entries.emplace_back(buf);
        }
    return wavecert::CoefficientField::build(entries, dim, false);
}

} // namespace testing
