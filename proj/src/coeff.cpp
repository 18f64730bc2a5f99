#include "wavecert/coeff.hpp"

#include "wavecert/parallel.hpp"

#include <cmath>
#include <limits>

namespace wavecert {

CoefficientField CoefficientField::build(std::vector<Expression> entries, bool diagonal, ConstantTable consts)
{
    if (entries.empty())
        throw Error("coefficient field needs at least one entry");
    const int dim = entries.front().dim();
    const std::size_t n = static_cast<std::size_t>(dim);
    const std::size_t expected = diagonal ? n : n * (n + 1) / 2;
    if (entries.size() != expected)
        throw Error("expected " + std::to_string(expected) + " coefficient entries for dimension " +
                    std::to_string(dim) + (diagonal ? " (diagonal)" : " (upper triangle)") + ", got " +
                    std::to_string(entries.size()));
    for (const auto& e : entries) {
        if (e.dim() != dim)
            throw Error("coefficient entries have mixed dimensions");
    }

    CoefficientField f;
    f.dim_ = dim;
    f.diagonal_ = diagonal;
    f.consts_ = std::move(consts);
    f.zero_ = Expression(dim);
    f.entries_ = std::move(entries);
    for (const auto& e : f.entries_) {
        std::vector<Expression> dk;
        for (int k = 0; k < dim; ++k)
            dk.push_back(e.differentiate(k));
        f.partials_.push_back(std::move(dk));
    }
    return f;
}

CoefficientField CoefficientField::build(const std::vector<std::string>& entries, int dim, bool diagonal,
                                         ConstantTable consts)
{
    std::vector<Expression> parsed;
    for (const auto& text : entries)
        parsed.push_back(Expression::parse(text, dim));
    if (parsed.empty())
        throw Error("coefficient field needs at least one entry");
    return build(std::move(parsed), diagonal, std::move(consts));
}

int CoefficientField::slot(int i, int j) const
{
    if (diagonal_)
        return i == j ? i : -1;
    if (i > j)
        std::swap(i, j);
    // Row-major upper triangle.
    return i * dim_ - i * (i - 1) / 2 + (j - i);
}

const Expression& CoefficientField::entry(int i, int j) const
{
    int s = slot(i, j);
    return s < 0 ? zero_ : entries_[static_cast<std::size_t>(s)];
}

const Expression& CoefficientField::partial(int i, int j, int k) const
{
    int s = slot(i, j);
    return s < 0 ? zero_ : partials_[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
}

FieldValues CoefficientField::evaluate(const Point& p) const
{
    const std::size_t n = static_cast<std::size_t>(dim_);
    FieldValues v{Matrix(n), std::vector<Matrix>(n, Matrix(n))};
    try {
        for (int i = 0; i < dim_; ++i) {
            for (int j = i; j < dim_; ++j) {
                int s = slot(i, j);
                if (s < 0)
                    continue;
                double aij = entries_[s].evaluate(p, consts_);
                v.a(i, j) = aij;
                v.a(j, i) = aij;
                for (int k = 0; k < dim_; ++k) {
                    double d = partials_[s][k].evaluate(p, consts_);
                    v.da[k](i, j) = d;
                    v.da[k](j, i) = d;
                }
            }
        }
    } catch (const DomainError& e) {
        throw e.at(p);
    }
    return v;
}

CoefficientField CoefficientField::reflected(const std::vector<bool>& flip) const
{
    std::vector<Expression> entries;
    for (const auto& e : entries_)
        entries.push_back(e.reflect(flip));
    return build(std::move(entries), diagonal_, consts_);
}

PositivityReport certify_positivity(const CoefficientField& f, const SampleGrid& g)
{
    if (g.points.empty())
        throw Error("empty sample grid");
    std::vector<double> lam(g.points.size());
    std::vector<char> chol_ok(g.points.size());
    parallel_for(g.points.size(), [&](std::size_t i) {
        FieldValues v = f.evaluate(g.points[i]);
        lam[i] = jacobi_eigenvalues(v.a).front();
        chol_ok[i] = cholesky(v.a).has_value();
    });
    PositivityReport r{std::numeric_limits<double>::infinity(), {}, 0};
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (lam[i] < r.alpha_min) {
            r.alpha_min = lam[i];
            r.worst_point = g.points[i];
        }
        if (static_cast<bool>(chol_ok[i]) != (lam[i] > 0.0))
            ++r.cholesky_disagreements;
    }
    return r;
}

SignRange partial_sign(const CoefficientField& f, int i, int k, const SampleGrid& g)
{
    if (!f.diagonal())
        throw Error("partial_sign requires a diagonal coefficient field");
    if (g.points.empty())
        throw Error("empty sample grid");
    const Expression& e = f.partial(i, i, k);
    std::vector<double> vals(g.points.size());
    parallel_for(g.points.size(), [&](std::size_t n) {
        try {
            vals[n] = e.evaluate(g.points[n], f.constants());
        } catch (const DomainError& err) {
            throw err.at(g.points[n]);
        }
    });
    SignRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), {}, {}};
    for (std::size_t n = 0; n < vals.size(); ++n) {
        if (vals[n] < r.min) {
            r.min = vals[n];
            r.argmin = g.points[n];
        }
        if (vals[n] > r.max) {
            r.max = vals[n];
            r.argmax = g.points[n];
        }
    }
    return r;
}

} // namespace wavecert
