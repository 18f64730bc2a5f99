#include "wavecert/curvature.hpp"

#include "wavecert/parallel.hpp"

#include <cmath>
#include <limits>

namespace wavecert {

const char* to_string(MetricConvention m) { return m == MetricConvention::coefficient ? "coefficient" : "inverse"; }

MetricConvention metric_convention_from_string(const std::string& s)
{
    if (s == "coefficient")
        return MetricConvention::coefficient;
    if (s == "inverse")
        return MetricConvention::inverse;
    throw Error("unknown metric convention '" + s + "' (expected coefficient or inverse)");
}

const char* to_string(CurvatureClass c)
{
    switch (c) {
    case CurvatureClass::uniformly_positive:
        return "uniformly_positive";
    case CurvatureClass::uniformly_negative:
        return "uniformly_negative";
    case CurvatureClass::sign_changing:
        return "sign_changing";
    case CurvatureClass::degenerate:
        return "degenerate";
    }
    return "unknown";
}

DiagonalMetric2D::DiagonalMetric2D(Expression a1, Expression a2, MetricConvention convention, ConstantTable consts)
    : convention_(convention), consts_(std::move(consts)), a1_(std::move(a1)), a2_(std::move(a2))
{
    if (a1_.dim() != 2 || a2_.dim() != 2)
        throw Error("curvature requires two-dimensional coefficients");
    a1_x1_ = a1_.differentiate(0);
    a2_x1_ = a2_.differentiate(0);
    a2_x1x1_ = a2_x1_.differentiate(0);

    if (convention_ == MetricConvention::coefficient) {
        e_ = a1_;
        g_ = a2_;
    } else {
        const Expression one = Expression::number(1.0, 2);
        e_ = one / a1_;
        g_ = one / a2_;
    }
    e1_ = e_.differentiate(0);
    e2_ = e_.differentiate(1);
    g1_ = g_.differentiate(0);
    g2_ = g_.differentiate(1);
    g11_ = g1_.differentiate(0);
    e22_ = e2_.differentiate(1);
}

double DiagonalMetric2D::gauss(const Point& p) const
{
    try {
        const double e = e_.evaluate(p, consts_);
        const double g = g_.evaluate(p, consts_);
        const double e1 = e1_.evaluate(p, consts_);
        const double e2 = e2_.evaluate(p, consts_);
        const double g1 = g1_.evaluate(p, consts_);
        const double g2 = g2_.evaluate(p, consts_);
        const double g11 = g11_.evaluate(p, consts_);
        const double e22 = e22_.evaluate(p, consts_);
        if (!(e > 0.0) || !(g > 0.0))
            throw DomainError("metric is not positive definite");
        const double eg = e * g;
        return -(g11 + e22) / (2.0 * eg) + (g1 * (e1 * g + e * g1) + e2 * (e2 * g + e * g2)) / (4.0 * eg * eg);
    } catch (const DomainError& err) {
        throw err.at(p);
    }
}

double DiagonalMetric2D::closed_form(const Point& p) const
{
    try {
        const double a1 = a1_.evaluate(p, consts_);
        const double a2 = a2_.evaluate(p, consts_);
        const double a1x = a1_x1_.evaluate(p, consts_);
        const double a2x = a2_x1_.evaluate(p, consts_);
        const double a2xx = a2_x1x1_.evaluate(p, consts_);
        const double prod = a1 * a2;
        return (a2 * a1x * a2x + a1 * a2x * a2x - 2.0 * a1 * a2 * a2xx) / (4.0 * prod * prod);
    } catch (const DomainError& err) {
        throw err.at(p);
    }
}

double curvature_wang(const Expression& a1, const Expression& a2, const Point& p, const ConstantTable& consts)
{
    return DiagonalMetric2D(a1, a2, MetricConvention::coefficient, consts).closed_form(p);
}

double gauss_curvature(const Expression& a1, const Expression& a2, const Point& p, MetricConvention convention,
                       const ConstantTable& consts)
{
    return DiagonalMetric2D(a1, a2, convention, consts).gauss(p);
}

namespace {

std::vector<Point> probe_points(const Region& r, int axis, double value, int resolution)
{
    const int other = 1 - axis;
    std::vector<Point> pts;
    for (int k = 0; k < resolution; ++k) {
        Point p(2);
        p[axis] = value;
        p[other] = grid_coordinate(r.box()[other], k, resolution);
        if (r.contains(p))
            pts.push_back(p);
    }
    return pts;
}

} // namespace

CurvatureReport classify_sign(const Expression& a1, const Expression& a2, const Region& r, int resolution,
                              const ClassifyOptions& opts, const ConstantTable& consts)
{
    if (r.dim() != 2)
        throw Error("curvature classification requires a two-dimensional region");
    if (opts.probe_axis < 0 || opts.probe_axis > 1)
        throw Error("probe axis must be 1 or 2");
    DiagonalMetric2D metric(a1, a2, opts.convention, consts);
    SampleGrid grid = sample(r, resolution);

    std::vector<double> k(grid.points.size());
    parallel_for(grid.points.size(), [&](std::size_t i) { k[i] = metric.gauss(grid.points[i]); });

    CurvatureReport rep;
    rep.convention = opts.convention;
    rep.k_min = std::numeric_limits<double>::infinity();
    rep.k_max = -std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    auto absorb = [&](const Point& p, double v) {
        if (v < rep.k_min) {
            rep.k_min = v;
            rep.argmin = p;
        }
        if (v > rep.k_max) {
            rep.k_max = v;
            rep.argmax = p;
        }
        max_abs = std::max(max_abs, std::abs(v));
    };
    for (std::size_t i = 0; i < k.size(); ++i) {
        absorb(grid.points[i], k[i]);
        if (opts.keep_per_point)
            rep.per_point.push_back({grid.points[i], k[i]});
    }
    rep.point_count = grid.points.size();

    for (double v : opts.probe_values) {
        ProbeResult pr{opts.probe_axis, v, 0, std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity(), {}, {}};
        for (const auto& p : probe_points(r, opts.probe_axis, v, resolution)) {
            double kv = metric.gauss(p);
            ++pr.point_count;
            if (kv < pr.k_min) {
                pr.k_min = kv;
                pr.argmin = p;
            }
            if (kv > pr.k_max) {
                pr.k_max = kv;
                pr.argmax = p;
            }
            absorb(p, kv);
        }
        rep.probes.push_back(std::move(pr));
    }

    for (const auto& pr : rep.probes) {
        if (pr.point_count == 0)
            continue;
        if (!rep.witness_positive && pr.k_min > 0.0)
            rep.witness_positive = pr.argmax;
        if (!rep.witness_negative && pr.k_max < 0.0)
            rep.witness_negative = pr.argmin;
    }
    if (!rep.witness_positive && rep.k_max > 0.0)
        rep.witness_positive = rep.argmax;
    if (!rep.witness_negative && rep.k_min < 0.0)
        rep.witness_negative = rep.argmin;

    if (max_abs <= opts.degenerate_tol)
        rep.classification = CurvatureClass::degenerate;
    else if (rep.k_min > 0.0)
        rep.classification = CurvatureClass::uniformly_positive;
    else if (rep.k_max < 0.0)
        rep.classification = CurvatureClass::uniformly_negative;
    else if (rep.k_min < 0.0 && rep.k_max > 0.0)
        rep.classification = CurvatureClass::sign_changing;
    else
        rep.classification = CurvatureClass::degenerate;
    return rep;
}

W32Check check_w32(double mu1, double mu2)
{
    return W32Check{mu1 > 0.0, mu2 > 0.0, mu1 + 2.0 * mu2 < 2.0, 3.0 * mu1 + 18.0 * mu2 > 2.0};
}

} // namespace wavecert
