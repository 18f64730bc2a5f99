#include "wavecert/condition.hpp"

#include "wavecert/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace wavecert {

WeightFunction::WeightFunction(Expression d) : d_(std::move(d))
{
    const int n = d_.dim();
    for (int i = 0; i < n; ++i)
        grad_.push_back(d_.differentiate(i));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            hess_.push_back(grad_[i].differentiate(j));
}

const Expression& WeightFunction::hessian(int i, int j) const
{
    if (i > j)
        std::swap(i, j);
    const int n = dim();
    return hess_[static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i))];
}

WeightFunction::Values WeightFunction::evaluate(const Point& p, const ConstantTable& consts) const
{
    const int n = dim();
    Values v{0.0, std::vector<double>(static_cast<std::size_t>(n)), Matrix(static_cast<std::size_t>(n))};
    try {
        v.value = d_.evaluate(p, consts);
        for (int i = 0; i < n; ++i)
            v.grad[i] = grad_[i].evaluate(p, consts);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double h = hessian(i, j).evaluate(p, consts);
                v.hess(i, j) = h;
                v.hess(j, i) = h;
            }
    } catch (const DomainError& e) {
        throw e.at(p);
    }
    return v;
}

Matrix assemble_B_general(const FieldValues& f, const WeightFunction::Values& w, double* raw_asymmetry)
{
    const std::size_t n = f.a.size();
    Matrix b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t ip = 0; ip < n; ++ip) {
                for (std::size_t jp = 0; jp < n; ++jp) {
                    s += f.a(i, jp) * f.a(ip, j) * w.hess(ip, jp);
                    s += 0.5 *
                         (f.a(i, jp) * f.da[jp](ip, j) + f.a(j, jp) * f.da[jp](ip, i) -
                          f.da[jp](i, j) * f.a(ip, jp)) *
                         w.grad[ip];
                }
            }
            b(i, j) = s;
        }
    }
    if (raw_asymmetry)
        *raw_asymmetry = b.asymmetry();
    return b.symmetrized();
}

Matrix assemble_B_diag(const FieldValues& f, const WeightFunction::Values& w)
{
    const std::size_t n = f.a.size();
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = f.a(i, i);
    // da(i, k) = a^i_{x_k}
    auto da = [&](std::size_t i, std::size_t k) { return f.da[k](i, i); };

    Matrix b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = 0.5 * (a[i] * da(j, i) * w.grad[j] + a[j] * da(i, j) * w.grad[i]) + a[i] * a[j] * w.hess(i, j);
        double trace_term = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            trace_term += a[k] * da(i, k) * w.grad[k];
        b(i, i) -= 0.5 * trace_term;
    }
    return b.symmetrized();
}

Matrix assemble_con1_form(const FieldValues& f, const WeightFunction::Values& w)
{
    const std::size_t n = f.a.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t ip = 0; ip < n; ++ip) {
                for (std::size_t jp = 0; jp < n; ++jp) {
                    // (a^{i'j} d_{x_i'})_{x_j'} = a^{i'j}_{x_j'} d_{x_i'} + a^{i'j} d_{x_i' x_j'}
                    double product = f.da[jp](ip, j) * w.grad[ip] + f.a(ip, j) * w.hess(ip, jp);
                    s += 2.0 * f.a(i, jp) * product - f.da[jp](i, j) * f.a(ip, jp) * w.grad[ip];
                }
            }
            m(i, j) = s;
        }
    }
    return m;
}

Matrix assemble_B_general(const CoefficientField& f, const WeightFunction& w, const Point& p)
{
    return assemble_B_general(f.evaluate(p), w.evaluate(p, f.constants()));
}

Matrix assemble_B_diag(const CoefficientField& f, const WeightFunction& w, const Point& p)
{
    if (!f.diagonal())
        throw Error("assemble_B_diag requires a diagonal coefficient field");
    return assemble_B_diag(f.evaluate(p), w.evaluate(p, f.constants()));
}

Matrix assemble_con1_form(const CoefficientField& f, const WeightFunction& w, const Point& p)
{
    return assemble_con1_form(f.evaluate(p), w.evaluate(p, f.constants()));
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::certified:
        return "certified";
    case Verdict::failed_con1:
        return "failed_con1";
    case Verdict::failed_con2:
        return "failed_con2";
    case Verdict::failed_A:
        return "failed_A";
    }
    return "unknown";
}

ConditionReport check_condition(const CoefficientField& f, const WeightFunction& w, const SampleGrid& g,
                                const CheckOptions& opts)
{
    if (f.dim() != w.dim())
        throw Error("coefficient field and weight have different dimensions");
    ConditionReport report;
    report.grid_resolution = g.resolution;
    report.point_count = g.points.size();

    PositivityReport pos = certify_positivity(f, g);
    report.alpha_min = pos.alpha_min;
    report.worst_point_A = pos.worst_point;
    if (!(pos.alpha_min > 0.0)) {
        report.verdict = Verdict::failed_A;
        report.mu0 = std::numeric_limits<double>::quiet_NaN();
        report.lambda_min_B = std::numeric_limits<double>::quiet_NaN();
        report.min_grad_norm = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    std::vector<PointRecord> records(g.points.size());
    parallel_for(g.points.size(), [&](std::size_t idx) {
        const Point& p = g.points[idx];
        FieldValues fv = f.evaluate(p);
        WeightFunction::Values wv = w.evaluate(p, f.constants());
        Matrix b = f.diagonal() ? assemble_B_diag(fv, wv) : assemble_B_general(fv, wv);

        PointRecord& rec = records[idx];
        rec.x = p;
        auto pencil = min_generalized_eigenvalue(b * 2.0, fv.a);
        rec.lambda_min_pencil = pencil.value_or(std::numeric_limits<double>::quiet_NaN());
        rec.lambda_min_B = jacobi_eigenvalues(b).front();
        double g2 = 0.0;
        for (double gi : wv.grad)
            g2 += gi * gi;
        rec.grad_norm = std::sqrt(g2);
        rec.minors = leading_minors(b);
    });

    report.mu0 = std::numeric_limits<double>::infinity();
    report.lambda_min_B = std::numeric_limits<double>::infinity();
    report.min_grad_norm = std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
        if (rec.lambda_min_pencil < report.mu0) {
            report.mu0 = rec.lambda_min_pencil;
            report.worst_point_con1 = rec.x;
        }
        report.lambda_min_B = std::min(report.lambda_min_B, rec.lambda_min_B);
        if (rec.grad_norm < report.min_grad_norm) {
            report.min_grad_norm = rec.grad_norm;
            report.worst_point_con2 = rec.x;
        }
        bool minors_positive = true;
        for (double m : rec.minors)
            minors_positive = minors_positive && m > 0.0;
        if (minors_positive != (rec.lambda_min_B > 0.0))
            ++report.sylvester_disagreements;
    }

    if (!(report.mu0 > 0.0))
        report.verdict = Verdict::failed_con1;
    else if (!(report.min_grad_norm > 0.0))
        report.verdict = Verdict::failed_con2;
    else
        report.verdict = Verdict::certified;

    if (opts.keep_per_point)
        report.per_point = std::move(records);
    return report;
}

ConditionReport check_condition(const CoefficientField& f, const WeightFunction& w, const Region& r, int resolution,
                                const CheckOptions& opts)
{
    return check_condition(f, w, sample(r, resolution), opts);
}

std::string per_point_csv(const ConditionReport& r, int dim)
{
    std::string out;
    for (int i = 1; i <= dim; ++i)
        out += "x" + std::to_string(i) + ",";
    out += "lambda_min_2B_vs_A,lambda_min_B,grad_norm";
    for (int i = 1; i <= dim; ++i)
        out += ",m" + std::to_string(i);
    out += "\n";
    char buf[40];
    auto put = [&](double v, bool comma) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (comma)
            out += ",";
        out += buf;
    };
    for (const auto& rec : r.per_point) {
        for (int i = 0; i < dim; ++i)
            put(rec.x[i], i > 0);
        put(rec.lambda_min_pencil, true);
        put(rec.lambda_min_B, true);
        put(rec.grad_norm, true);
        for (double m : rec.minors)
            put(m, true);
        out += "\n";
    }
    return out;
}

} // namespace wavecert
