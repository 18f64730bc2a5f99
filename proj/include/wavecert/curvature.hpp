#pragma once

// Gaussian curvature of two-dimensional diagonal metrics built from the
// coefficients a^1, a^2.
//
// Two conventions are supported:
//   coefficient: g = diag(a^1, a^2)
//   inverse:     g = diag(1/a^1, 1/a^2)
// The closed form
//   k = [a^2 a^1_{x1} a^2_{x1} + a^1 (a^2_{x1})^2 - 2 a^1 a^2 a^2_{x1x1}] / (4 (a^1 a^2)^2)
// (curvature_wang) depends on x1-derivatives only and coincides with the
// coefficient convention whenever a^1, a^2 depend on x1 alone.

#include "wavecert/domain.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavecert {

enum class MetricConvention { coefficient, inverse };
const char* to_string(MetricConvention m);
MetricConvention metric_convention_from_string(const std::string& s);

/// Precomputed symbolic ingredients for repeated point evaluation.
class DiagonalMetric2D {
public:
    DiagonalMetric2D(Expression a1, Expression a2, MetricConvention convention = MetricConvention::coefficient,
                     ConstantTable consts = {});

    MetricConvention convention() const noexcept { return convention_; }

    /// Orthogonal-metric formula
    ///   K = -(G_11 + E_22) / (2EG) + (G_1 (E_1 G + E G_1) + E_2 (E_2 G + E G_2)) / (4 (EG)^2)
    /// with E, G the metric components.
    double gauss(const Point& p) const;

    /// The closed form in terms of a^1, a^2 and their x1-derivatives.
    double closed_form(const Point& p) const;

private:
    MetricConvention convention_;
    ConstantTable consts_;
    Expression a1_, a2_, a1_x1_, a2_x1_, a2_x1x1_;
    Expression e_, g_, e1_, e2_, g1_, g2_, g11_, e22_;
};

double curvature_wang(const Expression& a1, const Expression& a2, const Point& p, const ConstantTable& consts = {});
double gauss_curvature(const Expression& a1, const Expression& a2, const Point& p,
                       MetricConvention convention = MetricConvention::coefficient,
                       const ConstantTable& consts = {});

enum class CurvatureClass { uniformly_positive, uniformly_negative, sign_changing, degenerate };
const char* to_string(CurvatureClass c);

struct ProbeResult {
    int axis;      // 0-based axis held fixed
    double value;  // x_axis = value
    std::size_t point_count;
    double k_min;
    double k_max;
    Point argmin;
    Point argmax;
};

struct CurvatureSample {
    Point x;
    double k;
};

struct CurvatureReport {
    MetricConvention convention = MetricConvention::coefficient;
    double k_min = 0.0;
    double k_max = 0.0;
    Point argmin;
    Point argmax;
    CurvatureClass classification = CurvatureClass::degenerate;
    std::optional<Point> witness_positive;
    std::optional<Point> witness_negative;
    std::vector<ProbeResult> probes;
    std::size_t point_count = 0;
    std::vector<CurvatureSample> per_point; // filled when requested
};

struct ClassifyOptions {
    MetricConvention convention = MetricConvention::coefficient;
    /// Slices {x_axis = v} sampled in addition to the grid. A slice on which
    /// k keeps one strict sign supplies the witness for that sign.
    int probe_axis = 0;
    std::vector<double> probe_values;
    bool keep_per_point = false;
    double degenerate_tol = 1e-12;
};

/// Grid sweep of gauss_curvature. sign_changing iff k_min < 0 < k_max;
/// degenerate when |k| <= degenerate_tol everywhere or k touches zero
/// without changing sign. Witnesses default to argmax / argmin.
CurvatureReport classify_sign(const Expression& a1, const Expression& a2, const Region& r, int resolution,
                              const ClassifyOptions& opts = {}, const ConstantTable& consts = {});

struct W32Check {
    bool mu1_positive;
    bool mu2_positive;
    bool sum_below_two;      // mu1 + 2 mu2 < 2
    bool weighted_above_two; // 3 mu1 + 18 mu2 > 2
    bool ok() const { return mu1_positive && mu2_positive && sum_below_two && weighted_above_two; }
};

/// Parameter constraints for a^1 = exp(mu1 x1), a^2 = exp(-mu2 x1^2) on the
/// disk centred at (2, 0) with radius^2 = 3/2 to give a sign-changing k.
W32Check check_w32(double mu1, double mu2);

} // namespace wavecert
