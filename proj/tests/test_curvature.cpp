#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "wavecert/curvature.hpp"

using namespace wavecert;
using testing::Rng;

namespace {

const ConstantTable sign_consts{{"mu1", 0.5}, {"mu2", 0.1}};

Expression parse2(const char* text)
{
    return Expression::parse(text, 2);
}

Region sign_disk()
{
    const double r = std::sqrt(1.5);
    return Region::from_strings({{2 - r, 2 + r}, {-r, r}}, {"(x1 - 2)^2 + x2^2 - 1.5"});
}

// k for a1 = exp(mu1 x1), a2 = exp(-mu2 x1^2) reduces to
//   -mu2 (mu1 x1 + 2 mu2 x1^2 - 2) / (2 a1).
double sign_example_oracle(double x1, double mu1, double mu2)
{
    return -mu2 * (mu1 * x1 + 2 * mu2 * x1 * x1 - 2) / (2 * std::exp(mu1 * x1));
}

// Orthogonal-metric formula with every metric derivative taken by central
// differences of the metric components.
double fd_gauss(const Expression& a1, const Expression& a2, Point p, MetricConvention m, const ConstantTable& consts)
{
    auto comp = [&](const Expression& a, const Point& q) {
        const double v = a.evaluate(q, consts);
        return m == MetricConvention::coefficient ? v : 1.0 / v;
    };
    const double h = 1e-4;
    auto d1 = [&](const Expression& a, int k) {
        Point up = p, dn = p;
        up[static_cast<std::size_t>(k)] += h;
        dn[static_cast<std::size_t>(k)] -= h;
        return (comp(a, up) - comp(a, dn)) / (2 * h);
    };
    auto d2 = [&](const Expression& a, int k) {
        Point up = p, dn = p;
        up[static_cast<std::size_t>(k)] += h;
        dn[static_cast<std::size_t>(k)] -= h;
        return (comp(a, up) - 2 * comp(a, p) + comp(a, dn)) / (h * h);
    };
    const double e = comp(a1, p), g = comp(a2, p);
    const double e1 = d1(a1, 0), e2 = d1(a1, 1), g1 = d1(a2, 0), g2 = d1(a2, 1);
    const double g11 = d2(a2, 0), e22 = d2(a1, 1);
    const double eg = e * g;
    return -(g11 + e22) / (2 * eg) + (g1 * (e1 * g + e * g1) + e2 * (e2 * g + e * g2)) / (4 * eg * eg);
}

} // namespace

TEST_CASE("curvature of the sign-change example on the slices x1 = 1 and x1 = 3")
{
    Expression a1 = parse2("exp(mu1*x1)");
    Expression a2 = parse2("exp(-mu2*x1^2)");
    const double k1 = curvature_wang(a1, a2, {1, 0}, sign_consts);
    const double k3 = curvature_wang(a1, a2, {3, 0}, sign_consts);
    CHECK(k1 > 0.0);
    CHECK(k3 < 0.0);
    CHECK(0.5 * 1 + 2 * 0.1 * 1 - 2 == doctest::Approx(-1.3));
    CHECK(0.5 * 3 + 2 * 0.1 * 9 - 2 == doctest::Approx(1.3));
    CHECK(k1 == doctest::Approx(sign_example_oracle(1, 0.5, 0.1)).epsilon(1e-13));
    CHECK(k3 == doctest::Approx(sign_example_oracle(3, 0.5, 0.1)).epsilon(1e-13));
}

TEST_CASE("flat metrics")
{
    Expression one = parse2("1");
    CHECK(curvature_wang(one, one, {0.3, 0.2}) == 0.0);
    CHECK(gauss_curvature(one, one, {0.3, 0.2}) == 0.0);
    CHECK(gauss_curvature(parse2("2"), parse2("7"), {0.3, 0.2}, MetricConvention::inverse) == 0.0);
    CurvatureReport r = classify_sign(parse2("2"), parse2("3"), Region({{0, 1}, {0, 1}}), 17);
    CHECK(r.classification == CurvatureClass::degenerate);
    CHECK(std::abs(r.k_min) < 1e-12);
    CHECK(std::abs(r.k_max) < 1e-12);
}

TEST_CASE("round sphere and hyperbolic plane")
{
    Rng rng(3);
    for (int n = 0; n < 20; ++n) {
        Point p{rng.uniform(0.5, 2.5), rng.uniform(-1, 1)};
        // dr^2 + sin(r)^2 dtheta^2
        CHECK(gauss_curvature(parse2("1"), parse2("sin(x1)^2"), p) == doctest::Approx(1.0).epsilon(1e-12));
        Point q{rng.uniform(-1, 1), rng.uniform(0.5, 2)};
        // (dx^2 + dy^2) / y^2, given directly and through the inverse convention.
        CHECK(gauss_curvature(parse2("1/x2^2"), parse2("1/x2^2"), q) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(gauss_curvature(parse2("x2^2"), parse2("x2^2"), q, MetricConvention::inverse) ==
              doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("closed form agrees with the orthogonal-metric formula for x1-only coefficients")
{
    Expression a1 = parse2("exp(mu1*x1)");
    Expression a2 = parse2("exp(-mu2*x1^2)");
    Rng rng(4);
    for (int n = 0; n < 50; ++n) {
        Point p = rng.in_region(sign_disk());
        CHECK(testing::rel_diff(curvature_wang(a1, a2, p, sign_consts), gauss_curvature(a1, a2, p,
                                                                                        MetricConvention::coefficient,
                                                                                        sign_consts)) <= 1e-8);
    }
    const std::vector<std::pair<const char*, const char*>> pairs{
        {"1 + x1^2", "exp(x1)"}, {"2 + sin(x1)", "1 + x1^4"}, {"exp(-x1)", "sqrt(1 + x1^2)"}};
    for (const auto& [s1, s2] : pairs) {
        Expression b1 = parse2(s1);
        Expression b2 = parse2(s2);
        for (int n = 0; n < 50; ++n) {
            Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            CHECK(testing::rel_diff(curvature_wang(b1, b2, p), gauss_curvature(b1, b2, p)) <= 1e-8);
        }
    }
}

TEST_CASE("closed form versus the general formula when coefficients depend on x2")
{
    Expression a1 = parse2("exp(x1 + x2)");
    Expression a2 = parse2("1 + x1^2 + x2^2");
    Rng rng(5);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
        Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        worst = std::max(worst, testing::rel_diff(curvature_wang(a1, a2, p), gauss_curvature(a1, a2, p)));
    }
    MESSAGE("largest relative gap for x2-dependent coefficients: ", worst);
    CHECK(worst > 1e-3); // the closed form ignores x2-derivatives
}

TEST_CASE("symbolic curvature matches finite differences of the metric")
{
    Rng rng(6);
    const std::vector<std::pair<const char*, const char*>> pairs{
        {"exp(x1 + x2)", "exp(x1 + x2)"}, {"1 + x1^2 + x2^2", "2 + sin(x1*x2)"}, {"exp(mu1*x1)", "exp(-mu2*x1^2)"}};
    for (MetricConvention m : {MetricConvention::coefficient, MetricConvention::inverse})
        for (const auto& [s1, s2] : pairs) {
            Expression a1 = parse2(s1);
            Expression a2 = parse2(s2);
            for (int n = 0; n < 20; ++n) {
                Point p{rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)};
                const double exact = gauss_curvature(a1, a2, p, m, sign_consts);
                const double fd = fd_gauss(a1, a2, p, m, sign_consts);
                CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
            }
        }
    // Isotropic exponential: both conventions are conformal to a harmonic exponent, so K vanishes.
    for (int n = 0; n < 20; ++n) {
        Point p{rng.uniform(1, 3), rng.uniform(-1, 1)};
        CHECK(std::abs(gauss_curvature(parse2("exp(x1 + x2)"), parse2("exp(x1 + x2)"), p)) < 1e-12);
    }
}

TEST_CASE("scaling both coefficients")
{
    Expression a1 = parse2("exp(mu1*x1)");
    Expression a2 = parse2("exp(-mu2*x1^2)*(1 + x2^2)");
    Rng rng(7);
    for (double s : {2.0, 10.0}) {
        Expression b1 = Expression::number(s, 2) * a1;
        Expression b2 = Expression::number(s, 2) * a2;
        for (int n = 0; n < 20; ++n) {
            Point p = rng.in_region(sign_disk());
            const double inv = gauss_curvature(a1, a2, p, MetricConvention::inverse, sign_consts);
            const double coef = gauss_curvature(a1, a2, p, MetricConvention::coefficient, sign_consts);
            CHECK(testing::rel_diff(gauss_curvature(b1, b2, p, MetricConvention::inverse, sign_consts), s * inv) <=
                  1e-10);
            CHECK(testing::rel_diff(gauss_curvature(b1, b2, p, MetricConvention::coefficient, sign_consts),
                                    coef / s) <= 1e-10);
        }
    }
}

TEST_CASE("sign-change example is classified as sign changing")
{
    Expression a1 = parse2("exp(mu1*x1)");
    Expression a2 = parse2("exp(-mu2*x1^2)");
    ClassifyOptions opts;
    opts.probe_axis = 0;
    opts.probe_values = {1.0, 3.0};
    CurvatureReport r = classify_sign(a1, a2, sign_disk(), 33, opts, sign_consts);
    CHECK(r.classification == CurvatureClass::sign_changing);
    REQUIRE(r.witness_positive.has_value());
    REQUIRE(r.witness_negative.has_value());
    CHECK((*r.witness_positive)[0] == doctest::Approx(1.0));
    CHECK((*r.witness_negative)[0] == doctest::Approx(3.0));
    CHECK(r.k_min < 0.0);
    CHECK(r.k_max > 0.0);
    REQUIRE(r.probes.size() == 2);
    CHECK(r.probes[0].k_min > 0.0);
    CHECK(r.probes[1].k_max < 0.0);

    // Without probes the witnesses are the extreme grid points.
    CurvatureReport plain = classify_sign(a1, a2, sign_disk(), 33, {}, sign_consts);
    CHECK(plain.classification == CurvatureClass::sign_changing);
    CHECK(*plain.witness_positive == plain.argmax);
    CHECK(*plain.witness_negative == plain.argmin);
}

TEST_CASE("under the inverse metric the sign-change example keeps one sign")
{
    ClassifyOptions opts;
    opts.convention = MetricConvention::inverse;
    CurvatureReport r = classify_sign(parse2("exp(mu1*x1)"), parse2("exp(-mu2*x1^2)"), sign_disk(), 33, opts,
                                      sign_consts);
    CHECK(r.classification == CurvatureClass::uniformly_negative);
}

TEST_CASE("isotropic exponential is reported")
{
    Region disk = Region::from_strings({{1, 3}, {-1, 1}}, {"(x1 - 2)^2 + x2^2 - 1"});
    CurvatureReport r = classify_sign(parse2("exp(x1 + x2)"), parse2("exp(x1 + x2)"), disk, 17);
    CHECK(r.point_count > 0);
    CHECK(r.classification == CurvatureClass::degenerate);
}

TEST_CASE("parameter constraints")
{
    W32Check ok = check_w32(0.5, 0.1);
    CHECK(ok.ok());
    W32Check zero = check_w32(0.0, 1.0);
    CHECK_FALSE(zero.ok());
    CHECK_FALSE(zero.mu1_positive);
    W32Check big = check_w32(1.9, 0.1);
    CHECK_FALSE(big.ok());
    CHECK_FALSE(big.sum_below_two);
    CHECK(big.weighted_above_two);
}

TEST_CASE("metric convention names")
{
    CHECK(metric_convention_from_string("coefficient") == MetricConvention::coefficient);
    CHECK(metric_convention_from_string("inverse") == MetricConvention::inverse);
    CHECK_THROWS_AS(metric_convention_from_string("other"), Error);
}
