// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "wavecert/commands.hpp"
#include "wavecert/condition.hpp"
#include "wavecert/curvature.hpp"
#include "wavecert/rays.hpp"
#include "wavecert/weight.hpp"

#include <chrono>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace wavecert;
using testing::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...)
{
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

struct Outcome {
    bool pass;
    std::string detail;
};

const double root2 = std::sqrt(2.0);

Region far_disk()
{
    return Region::from_strings({{1, 3}, {-1, 1}}, {"(x1 - 2)^2 + x2^2 - 1"});
}

Region trap_disk()
{
    return Region::from_strings({{-root2, root2}, {-root2, root2}}, {"x1^2 + x2^2 - 2"});
}

CoefficientField isotropic()
{
    return CoefficientField::build({"exp(x1 + x2)", "exp(x1 + x2)"}, 2, true);
}

CoefficientField trap()
{
    return CoefficientField::build({"1 + x1^2 + x2^2", "1 + x1^2 + x2^2"}, 2, true);
}

// Construction pipeline: largest-margin admissible index, smallest shift, lambda search.
WeightCertificate construct(const CoefficientField& f, const SampleGrid& g)
{
    std::vector<AdmissibleIndex> idx = detect_index(f, g);
    if (idx.empty())
        throw Error("no admissible index");
    AdmissibleIndex best = idx.front();
    for (const auto& a : idx)
        if (a.sign_margin > best.sign_margin)
            best = a;
    return find_lambda(f, g, best.j, best.sign_case, compute_c(g, best.j, best.sign_case));
}

Outcome classical_multiplier()
{
    auto start = Clock::now();
    CoefficientField f = CoefficientField::build({"1", "1"}, 2, true);
    WeightFunction w(Expression::parse("(x1^2 + x2^2)/2", 2));
    ConditionReport r = check_condition(f, w, far_disk(), 33);
    const double elapsed = seconds_since(start);
    const bool pass = r.verdict == Verdict::certified && std::abs(r.mu0 - 2.0) <= 1e-9 &&
                      r.min_grad_norm >= 1.0 - 1e-9 && elapsed < 1.0;
    return {pass, fmt("verdict %s, mu0 %.17g, min|grad d| %.17g, %.3f s", to_string(r.verdict), r.mu0,
                      r.min_grad_norm, elapsed)};
}

Outcome quadratic_form_identity()
{
    Rng rng(1001);
    double worst_m = 0.0;
    double worst_d = 0.0;
    int triples = 0;
    for (const auto& ex : bundled_examples()) {
        ProblemConfig c = parse_config(ex.config);
        CoefficientField f = CoefficientField::build(c.entries, c.dim, c.diagonal, c.constants);
        Region region = c.region();
        for (int n = 0; n < 100; ++n, ++triples) {
            WeightFunction w(testing::random_weight(rng, c.dim));
            Point p = rng.in_region(region);
            Matrix b = assemble_B_general(f, w, p);
            worst_m = std::max(worst_m, testing::rel_frobenius(assemble_con1_form(f, w, p).symmetrized(), b * 2.0));
            if (f.diagonal())
                worst_d = std::max(worst_d, testing::rel_frobenius(assemble_B_diag(f, w, p), b));
        }
    }
    return {worst_m <= 1e-10 && worst_d <= 1e-10,
            fmt("%d triples, max rel |sym(M) - 2B| %.3g, max rel |B_diag - B| %.3g", triples, worst_m, worst_d)};
}

Outcome isotropic_positive_case(double& mu0_out)
{
    auto start = Clock::now();
    SampleGrid g = sample(far_disk(), 33);
    WeightCertificate cert = construct(isotropic(), g);
    const double elapsed = seconds_since(start);
    ConditionReport fine = check_condition(isotropic(), cert.weight, sample(far_disk(), 65));
    mu0_out = cert.report.mu0;
    const bool pass = cert.report.verdict == Verdict::certified && cert.report.mu0 > 0.0 &&
                      cert.lambda <= 1048576.0 && fine.verdict == Verdict::certified && fine.mu0 > 0.0 &&
                      cert.sign_case == SignCase::positive && elapsed < 30.0;
    return {pass, fmt("j %d, case %s, c %g, lambda %.17g, mu0 %.6g; resolution 65: %s, mu0 %.6g; %.3f s", cert.j + 1,
                      to_string(cert.sign_case), cert.c, cert.lambda, cert.report.mu0, to_string(fine.verdict),
                      fine.mu0, elapsed)};
}

Outcome isotropic_negative_case(double reference_mu0)
{
    const std::vector<bool> flip{true, true};
    CoefficientField f = isotropic().reflected(flip);
    SampleGrid g = sample(far_disk().reflected(flip), 33);
    WeightCertificate cert = construct(f, g);
    const double rel = testing::rel_diff(cert.report.mu0, reference_mu0);
    const bool pass = cert.sign_case == SignCase::negative && cert.report.verdict == Verdict::certified && rel <= 1e-9;

    // Reflecting x1 alone also yields a negative-case instance, but the off-axis
    // weight terms are not mirrored, so its margin is reported for information only.
    const std::vector<bool> axis{true, false};
    CoefficientField fa = isotropic().reflected(axis);
    SampleGrid ga = sample(far_disk().reflected(axis), 33);
    std::string single = "not certified";
    try {
        WeightCertificate ca = find_lambda(fa, ga, 0, SignCase::negative, compute_c(ga, 0, SignCase::negative));
        single = fmt("lambda %.6g, mu0 %.6g", ca.lambda, ca.report.mu0);
    } catch (const ConstructionError& e) {
        single = e.what();
    }
    return {pass, fmt("x -> -x: j %d, case %s, lambda %.17g, mu0 %.6g, relative gap %.3g (x1 -> -x1 only: %s)",
                      cert.j + 1, to_string(cert.sign_case), cert.lambda, cert.report.mu0, rel, single.c_str())};
}

Outcome limit_asymptotics()
{
    SampleGrid g = sample(far_disk(), 33);
    const double c = compute_c(g, 0, SignCase::positive);
    std::vector<double> dist, r1, r2, r3;
    for (double lambda : {5.0, 10.0, 20.0, 40.0, 80.0}) {
        dist.push_back(limit_distance(isotropic(), g, 0, SignCase::positive, c, lambda));
        DecayRatios d = decay_ratios(g, 0, SignCase::positive, c, lambda);
        r1.push_back(d.grad_over_hess_jj);
        r2.push_back(d.grad_over_grad_j);
        r3.push_back(d.hess_ii_over_grad_j);
    }
    auto decreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] < v[i - 1]))
                return false;
        return true;
    };
    const bool pass = decreasing(dist) && dist.back() < 0.1 * dist.front() && decreasing(r1) && decreasing(r2) &&
                      decreasing(r3);
    return {pass, fmt("limit distance %.4g -> %.4g (ratio %.4g); ratios end at %.3g, %.3g, %.3g", dist.front(),
                      dist.back(), dist.back() / dist.front(), r1.back(), r2.back(), r3.back())};
}

Outcome trapping_field_negative()
{
    SampleGrid g = sample(trap_disk(), 33);
    const bool empty = detect_index(trap(), g).empty();
    double straddle = std::numeric_limits<double>::infinity();
    for (const auto& pr : partial_sign_table(trap(), g))
        straddle = std::min({straddle, -pr.range.min, pr.range.max});

    // Forced j = 1 in both sign cases: a capped search must run out of lambda,
    // and the default cap must end without a certificate.
    bool exhausted = true;
    bool uncertified = true;
    std::string default_end;
    for (SignCase s : {SignCase::negative, SignCase::positive}) {
        const double c = compute_c(g, 0, s);
        SearchOptions capped;
        capped.lambda_max = 64;
        try {
            find_lambda(trap(), g, 0, s, c, capped);
            exhausted = false;
        } catch (const ConstructionError& e) {
            exhausted = exhausted && e.kind() == ConstructionError::Kind::lambda_max_exceeded;
        }
        try {
            find_lambda(trap(), g, 0, s, c);
            uncertified = false;
        } catch (const ConstructionError& e) {
            default_end = e.what();
        }
    }
    const bool pass = empty && straddle >= 0.05 && exhausted && uncertified;
    return {pass, fmt("admissible set %s, sign margin %.4g on both sides; lambda_max 64 %s; default cap: %s",
                      empty ? "empty" : "NOT empty", straddle, exhausted ? "exhausted" : "NOT exhausted",
                      uncertified ? default_end.c_str() : "CERTIFIED")};
}

Outcome curvature_sign_change()
{
    const ConstantTable consts{{"mu1", 0.5}, {"mu2", 0.1}};
    const double r = std::sqrt(1.5);
    Region disk = Region::from_strings({{2 - r, 2 + r}, {-r, r}}, {"(x1 - 2)^2 + x2^2 - 1.5"});
    Expression a1 = Expression::parse("exp(mu1*x1)", 2);
    Expression a2 = Expression::parse("exp(-mu2*x1^2)", 2);
    ClassifyOptions opts;
    opts.probe_axis = 0;
    opts.probe_values = {1.0, 3.0};
    CurvatureReport rep = classify_sign(a1, a2, disk, 33, opts, consts);
    const bool w32 = check_w32(0.5, 0.1).ok();
    const bool witnesses = rep.witness_positive && rep.witness_negative && (*rep.witness_positive)[0] >= 0.9 &&
                           (*rep.witness_positive)[0] <= 1.1 && (*rep.witness_negative)[0] >= 2.9 &&
                           (*rep.witness_negative)[0] <= 3.1;
    Rng rng(1007);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
        Point p = rng.in_region(disk);
        worst = std::max(worst, testing::rel_diff(curvature_wang(a1, a2, p, consts),
                                                  gauss_curvature(a1, a2, p, MetricConvention::coefficient, consts)));
    }
    const bool pass = w32 && rep.classification == CurvatureClass::sign_changing && witnesses && worst <= 1e-8;
    return {pass, fmt("parameters %s, %s, k in [%.4g, %.4g], witnesses %s / %s, max rel gap %.3g", w32 ? "ok" : "FAIL",
                      to_string(rep.classification), rep.k_min, rep.k_max,
                      rep.witness_positive ? format_point(*rep.witness_positive).c_str() : "none",
                      rep.witness_negative ? format_point(*rep.witness_negative).c_str() : "none", worst)};
}

Outcome derivative_exactness()
{
    Rng rng(1008);
    int expressions = 0;
    int checks = 0;
    int failures = 0;
    double worst = 0.0;
    for (const auto& ex : bundled_examples()) {
        ProblemConfig c = parse_config(ex.config);
        Region region = c.region();
        std::vector<std::string> texts = c.entries;
        if (c.weight)
            texts.push_back(*c.weight);
        texts.insert(texts.end(), c.constraints.begin(), c.constraints.end());
        for (const auto& text : texts) {
            Expression e = Expression::parse(text, c.dim);
            ++expressions;
            for (int k = 0; k < c.dim; ++k) {
                Expression de = e.differentiate(k);
                for (int n = 0; n < 100; ++n) {
                    Point p = rng.in_box(region.box());
                    const double exact = de.evaluate(p, c.constants);
                    const double fd = testing::central_difference(e, p, k, c.constants);
                    const double scale = std::max(std::abs(exact), std::abs(e.evaluate(p, c.constants)));
                    const double rel = scale == 0.0 ? std::abs(exact - fd) : std::abs(exact - fd) / scale;
                    worst = std::max(worst, rel);
                    failures += rel > 1e-6;
                    ++checks;
                }
            }
        }
    }
    return {failures == 0,
            fmt("%d expressions, %d comparisons, %d over tolerance, max rel error %.3g", expressions, checks, failures,
                worst)};
}

Outcome ray_diagnostics()
{
    CoefficientField identity = CoefficientField::build({"1", "1"}, 2, true);
    Region disk = trap_disk();
    Rng rng(1009);
    double worst_chord = 0.0;
    for (int n = 0; n < 50; ++n) {
        Point x = rng.in_region(disk, 0.05);
        const double theta = rng.uniform(0, 2 * M_PI);
        Point v{std::cos(theta), std::sin(theta)};
        RayOutcome o = trace(identity, disk, {x, v, 0}, 10, 0.01);
        const double b = x[0] * v[0] + x[1] * v[1];
        const double chord = -b + std::sqrt(b * b - (x[0] * x[0] + x[1] * x[1] - 2.0));
        worst_chord = std::max(worst_chord, o.escaped ? std::abs(o.escape_time - chord) : 1.0);
    }
    double worst_drift = 0.0;
    int traces = 0;
    for (const auto& o : fan(trap(), disk, {0, 0}, 32, 20, 0.01)) {
        worst_drift = std::max(worst_drift, o.max_drift);
        ++traces;
    }
    for (int n = 0; n < 32; ++n) {
        Point x = rng.in_region(disk, 0.05);
        RayOutcome o = trace(trap(), disk, {x, {rng.uniform(-1, 1), rng.uniform(-1, 1)}, 0}, 20, 0.01);
        worst_drift = std::max(worst_drift, o.max_drift);
        ++traces;
    }
    return {worst_chord <= 1e-6 && worst_drift <= 1e-6,
            fmt("max chord error %.3g; %d traces on the trapping field, max drift %.3g", worst_chord, traces,
                worst_drift)};
}

std::string run_examples_cli(const std::string& tag, const std::string& threads)
{
    const std::string json = "acceptance_examples_" + tag + ".json";
    const std::string cmd = std::string(WAVECERT_CLI) + " examples all --threads " + threads + " --json " + json +
                            " > /dev/null";
    const int status = std::system(cmd.c_str());
    if (status != 0)
        throw Error("'" + cmd + "' exited with status " + std::to_string(status));
    std::ifstream in(json);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(json.c_str());
    return write_report(without_durations(ReportTree::parse(ss.str())));
}

Outcome determinism()
{
    const std::string a = run_examples_cli("a", "0");
    const std::string b = run_examples_cli("b", "0");
    const std::string one = run_examples_cli("t1", "1");
    const std::string four = run_examples_cli("t4", "4");
    const bool pass = a == b && a == one && a == four && !a.empty();
    return {pass, fmt("report %zu bytes; repeat %s, --threads 1 %s, --threads 4 %s", a.size(),
                      a == b ? "identical" : "DIFFERS", a == one ? "identical" : "DIFFERS",
                      a == four ? "identical" : "DIFFERS")};
}

} // namespace

int main()
{
    double case2_mu0 = std::numeric_limits<double>::quiet_NaN();
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"classical multiplier sanity", classical_multiplier},
        {"quadratic-form identity", quadratic_form_identity},
        {"exponential weight, positive case", [&] { return isotropic_positive_case(case2_mu0); }},
        {"exponential weight, negative case", [&] { return isotropic_negative_case(case2_mu0); }},
        {"limit asymptotics", limit_asymptotics},
        {"trapping field negative", trapping_field_negative},
        {"curvature sign change", curvature_sign_change},
        {"derivative exactness", derivative_exactness},
        {"ray diagnostics", ray_diagnostics},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
