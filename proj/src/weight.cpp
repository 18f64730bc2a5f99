#include "wavecert/weight.hpp"

#include "wavecert/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace wavecert {

const char* to_string(SignCase s) { return s == SignCase::negative ? "negative" : "positive"; }

ConstructionError::ConstructionError(Kind kind, const std::string& what, std::optional<ConditionReport> best,
                                     double best_lambda)
    : Error(what), kind_(kind), best_(std::move(best)), best_lambda_(best_lambda)
{
}

std::vector<PartialRange> partial_sign_table(const CoefficientField& f, const SampleGrid& g)
{
    std::vector<PartialRange> table;
    for (int k = 0; k < f.dim(); ++k)
        for (int i = 0; i < f.dim(); ++i)
            if (i != k)
                table.push_back({i, k, partial_sign(f, i, k, g)});
    return table;
}

std::vector<AdmissibleIndex> detect_index(const CoefficientField& f, const SampleGrid& g)
{
    if (!f.diagonal())
        throw ConstructionError(ConstructionError::Kind::not_diagonal,
                                "weight construction requires a diagonal coefficient field");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<AdmissibleIndex> out;
    for (int j = 0; j < f.dim(); ++j) {
        double lo = inf;
        double hi = -inf;
        for (int i = 0; i < f.dim(); ++i) {
            if (i == j)
                continue;
            SignRange r = partial_sign(f, i, j, g);
            lo = std::min(lo, r.min);
            hi = std::max(hi, r.max);
        }
        if (f.dim() == 1) {
            out.push_back({j, SignCase::negative, inf});
            out.push_back({j, SignCase::positive, inf});
            continue;
        }
        if (hi < 0.0)
            out.push_back({j, SignCase::negative, -hi});
        if (lo > 0.0)
            out.push_back({j, SignCase::positive, lo});
    }
    return out;
}

double compute_c(const SampleGrid& g, int j, SignCase s)
{
    if (g.points.empty())
        throw Error("empty sample grid");
    double max_off = -std::numeric_limits<double>::infinity();
    double min_xj = std::numeric_limits<double>::infinity();
    double max_xj = -std::numeric_limits<double>::infinity();
    for (const auto& p : g.points) {
        double sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (static_cast<int>(i) != j)
                sum += std::abs(p[i]);
        max_off = std::max(max_off, sum);
        min_xj = std::min(min_xj, p[j]);
        max_xj = std::max(max_xj, p[j]);
    }
    return s == SignCase::negative ? 1.0 + max_off - min_xj : 1.0 + max_off + max_xj;
}

WeightFunction construct_d(int j, SignCase s, double c, double lambda, int dim)
{
    if (!(lambda > 0.0))
        throw Error("lambda must be positive");
    if (j < 0 || j >= dim)
        throw Error("axis out of range");
    auto num = [dim](double v) { return Expression::number(v, dim); };
    auto var = [dim](int k) { return Expression::variable(k, dim); };

    Expression d = s == SignCase::negative ? exp(num(lambda) * (num(c) + var(j)))
                                           : exp(num(-lambda) * (var(j) - num(c)));
    for (int i = 0; i < dim; ++i) {
        if (i == j)
            continue;
        d = d + exp(num(s == SignCase::negative ? lambda : -lambda) * var(i));
    }
    return WeightFunction(std::move(d));
}

double max_exponent(const SampleGrid& g, int j, SignCase s, double c, double lambda)
{
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : g.points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            double arg;
            if (static_cast<int>(i) == j)
                arg = s == SignCase::negative ? lambda * (c + p[i]) : -lambda * (p[i] - c);
            else
                arg = s == SignCase::negative ? lambda * p[i] : -lambda * p[i];
            m = std::max(m, arg);
        }
    }
    return m;
}

namespace {

bool passes(const ConditionReport& r, const SearchOptions& opts)
{
    return r.verdict == Verdict::certified && r.mu0 >= opts.target_margin * r.alpha_min;
}

std::string lambda_text(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

WeightCertificate find_lambda(const CoefficientField& f, const SampleGrid& g, int j, SignCase s, double c,
                              const SearchOptions& opts)
{
    if (!f.diagonal())
        throw ConstructionError(ConstructionError::Kind::not_diagonal,
                                "weight construction requires a diagonal coefficient field");
    if (opts.lambda_max < 1.0)
        throw Error("lambda_max must be at least 1");

    const double log_limit = std::log(opts.overflow_limit);
    const int dim = f.dim();

    std::optional<ConditionReport> best;
    double best_lambda = 0.0;
    auto record_failure = [&](const ConditionReport& r, double lambda) {
        bool better = !best || (std::isnan(best->mu0) && !std::isnan(r.mu0)) || r.mu0 > best->mu0;
        if (better) {
            best = r;
            best_lambda = lambda;
        }
    };

    auto evaluate = [&](double lambda) {
        if (max_exponent(g, j, s, c, lambda) > log_limit)
            throw ConstructionError(ConstructionError::Kind::overflow,
                                    "exponential weight overflows at lambda = " + lambda_text(lambda) +
                                        "; translate the domain toward the origin and retry",
                                    best, best_lambda);
        return check_condition(f, construct_d(j, s, c, lambda, dim), g);
    };

    double lambda = 1.0;
    double last_fail = 0.0;
    int doubling = 0;
    ConditionReport pass_report;
    for (;;) {
        if (lambda > opts.lambda_max)
            throw ConstructionError(ConstructionError::Kind::lambda_max_exceeded,
                                    "lambda_max exceeded (" + lambda_text(opts.lambda_max) + ") without certifying",
                                    best, best_lambda);
        ++doubling;
        ConditionReport r = evaluate(lambda);
        if (passes(r, opts)) {
            pass_report = std::move(r);
            break;
        }
        record_failure(r, lambda);
        last_fail = lambda;
        lambda *= 2.0;
    }

    int bisection = 0;
    if (last_fail > 0.0) {
        double lo = last_fail;
        double hi = lambda;
        for (int round = 0; round < opts.bisection_rounds; ++round) {
            double mid = 0.5 * (lo + hi);
            ConditionReport r = evaluate(mid);
            ++bisection;
            if (passes(r, opts)) {
                hi = mid;
                pass_report = std::move(r);
            } else {
                lo = mid;
            }
        }
        lambda = hi;
    }

    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        if (i == j)
            continue;
        SignRange r = partial_sign(f, i, j, g);
        margin = std::min(margin, s == SignCase::negative ? -r.max : r.min);
    }

    return WeightCertificate{j,      s,      c,      lambda,  construct_d(j, s, c, lambda, dim), std::move(pass_report),
                             margin, doubling, bisection};
}

Matrix scaled_B(const CoefficientField& f, const WeightFunction& w, int j, SignCase s, const Point& p)
{
    FieldValues fv = f.evaluate(p);
    WeightFunction::Values wv = w.evaluate(p, f.constants());
    Matrix b = assemble_B_diag(fv, wv);
    const std::size_t n = b.size();
    const std::size_t jj = static_cast<std::size_t>(j);
    double row_j = wv.hess(jj, jj);
    double other = s == SignCase::negative ? wv.grad[jj] : -wv.grad[jj];
    for (std::size_t i = 0; i < n; ++i) {
        double scale = i == jj ? row_j : other;
        for (std::size_t k = 0; k < n; ++k)
            b(i, k) /= scale;
    }
    return b;
}

Matrix limit_matrix(const CoefficientField& f, int j, SignCase s, const Point& p)
{
    if (!f.diagonal())
        throw Error("limit_matrix requires a diagonal coefficient field");
    FieldValues fv = f.evaluate(p);
    const std::size_t n = fv.a.size();
    const std::size_t jj = static_cast<std::size_t>(j);
    const double sign = s == SignCase::negative ? 1.0 : -1.0;
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == jj) {
            m(i, i) = fv.a(jj, jj) * fv.a(jj, jj);
            continue;
        }
        // row i: 1/2 a^i a^j_{x_i} e_j - 1/2 a^j a^i_{x_j} e_i, negated in the positive case
        m(i, jj) = sign * 0.5 * fv.a(i, i) * fv.da[i](jj, jj);
        m(i, i) = -sign * 0.5 * fv.a(jj, jj) * fv.da[jj](i, i);
    }
    return m;
}

double limit_distance(const CoefficientField& f, const SampleGrid& g, int j, SignCase s, double c, double lambda)
{
    WeightFunction w = construct_d(j, s, c, lambda, f.dim());
    std::vector<double> dist(g.points.size());
    parallel_for(g.points.size(), [&](std::size_t idx) {
        const Point& p = g.points[idx];
        dist[idx] = (scaled_B(f, w, j, s, p) - limit_matrix(f, j, s, p)).max_abs();
    });
    return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
}

DecayRatios decay_ratios(const SampleGrid& g, int j, SignCase s, double c, double lambda)
{
    const int dim = g.points.empty() ? 0 : static_cast<int>(g.points.front().size());
    WeightFunction w = construct_d(j, s, c, lambda, dim);
    DecayRatios r{0.0, 0.0, 0.0};
    for (const auto& p : g.points) {
        WeightFunction::Values v = w.evaluate(p);
        const double dj = v.grad[j];
        const double djj = v.hess(j, j);
        for (int i = 0; i < dim; ++i) {
            r.grad_over_hess_jj = std::max(r.grad_over_hess_jj, std::abs(v.grad[i] / djj));
            if (i == j)
                continue;
            r.grad_over_grad_j = std::max(r.grad_over_grad_j, std::abs(v.grad[i] / dj));
            r.hess_ii_over_grad_j = std::max(r.hess_ii_over_grad_j, std::abs(v.hess(i, i) / dj));
        }
    }
    return r;
}

} // namespace wavecert
