#include "wavecert/commands.hpp"

#include "wavecert/curvature.hpp"
#include "wavecert/rays.hpp"
#include "wavecert/weight.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace wavecert {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ReportTree point_json(const Point& p)
{
    ReportTree a = ReportTree::array();
    for (double v : p)
        a.push_back(v);
    return a;
}

ReportTree header(const std::string& command, const ProblemConfig* c)
{
    ReportTree r;
    r["tool"] = "wavecert";
    r["version"] = tool_version;
    r["command"] = command;
    if (c)
        r["config"] = c->to_json();
    return r;
}

void finish(RunResult& out, const std::string& verdict, int exit_code)
{
    out.report["verdict"] = verdict;
    out.report["exit_code"] = exit_code;
    out.exit_code = exit_code;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + path + "'");
    f << content;
}

CoefficientField field_of(const ProblemConfig& c)
{
    return CoefficientField::build(c.entries, c.dim, c.diagonal, c.constants);
}

ReportTree condition_json(const ConditionReport& r)
{
    ReportTree j;
    j["verdict"] = to_string(r.verdict);
    j["mu0"] = r.mu0;
    j["lambda_min_B"] = r.lambda_min_B;
    j["min_grad_norm"] = r.min_grad_norm;
    j["alpha_min"] = r.alpha_min;
    j["worst_point_con1"] = point_json(r.worst_point_con1);
    j["worst_point_con2"] = point_json(r.worst_point_con2);
    j["worst_point_A"] = point_json(r.worst_point_A);
    j["grid_resolution"] = r.grid_resolution;
    j["point_count"] = r.point_count;
    j["sylvester_disagreements"] = r.sylvester_disagreements;
    return j;
}

std::string condition_text(const ConditionReport& r)
{
    std::ostringstream s;
    s << "  alpha_min      " << num(r.alpha_min) << " at " << format_point(r.worst_point_A) << "\n";
    if (r.verdict == Verdict::failed_A)
        return s.str();
    s << "  mu0            " << num(r.mu0) << " at " << format_point(r.worst_point_con1) << "\n";
    s << "  lambda_min(B)  " << num(r.lambda_min_B) << "\n";
    s << "  min |grad d|   " << num(r.min_grad_norm) << " at " << format_point(r.worst_point_con2) << "\n";
    s << "  grid           " << r.point_count << " points at resolution " << r.grid_resolution << "\n";
    return s.str();
}

ReportTree sign_table_json(const std::vector<PartialRange>& table)
{
    ReportTree a = ReportTree::array();
    for (const auto& pr : table) {
        ReportTree e;
        e["coefficient"] = pr.i + 1;
        e["axis"] = pr.k + 1;
        e["min"] = pr.range.min;
        e["max"] = pr.range.max;
        e["argmin"] = point_json(pr.range.argmin);
        e["argmax"] = point_json(pr.range.argmax);
        a.push_back(e);
    }
    return a;
}

std::string sign_table_text(const std::vector<PartialRange>& table)
{
    std::ostringstream s;
    for (const auto& pr : table)
        s << "  a" << pr.i + 1 << "_x" << pr.k + 1 << " ranges over [" << num(pr.range.min) << ", "
          << num(pr.range.max) << "]\n";
    return s.str();
}

// Sign case and margin for a forced axis whose partials may not keep a sign.
AdmissibleIndex forced_index(const std::vector<PartialRange>& table, int j)
{
    double neg = std::numeric_limits<double>::infinity();
    double pos = std::numeric_limits<double>::infinity();
    for (const auto& pr : table) {
        if (pr.k != j)
            continue;
        neg = std::min(neg, -pr.range.max);
        pos = std::min(pos, pr.range.min);
    }
    if (pos > neg)
        return {j, SignCase::positive, pos};
    return {j, SignCase::negative, neg};
}

} // namespace

RunResult cmd_verify(const ProblemConfig& c)
{
    if (!c.weight)
        throw ConfigError("verify needs a weight expression ([problem] weight = \"...\")");
    CoefficientField f = field_of(c);
    WeightFunction w(Expression::parse(*c.weight, c.dim));
    SampleGrid g = sample(c.region(), c.resolution);

    CheckOptions opts;
    opts.keep_per_point = c.dump_grid.has_value();
    ConditionReport r = check_condition(f, w, g, opts);
    PositivityReport pos = certify_positivity(f, g);
    if (c.dump_grid)
        write_file(*c.dump_grid, per_point_csv(r, c.dim));

    RunResult out;
    out.report = header("verify", &c);
    ReportTree res = condition_json(r);
    res["cholesky_disagreements"] = pos.cholesky_disagreements;
    out.report["result"] = res;
    out.text = "verify: " + std::string(to_string(r.verdict)) + "\n" + condition_text(r);
    finish(out, to_string(r.verdict), r.verdict == Verdict::certified ? exit_ok : exit_not_certified);
    return out;
}

RunResult cmd_construct(const ProblemConfig& c)
{
    if (!c.diagonal)
        throw ConfigError("construct requires a diagonal coefficient matrix (A.diagonal = true)");
    CoefficientField f = field_of(c);
    SampleGrid g = sample(c.region(), c.resolution);

    RunResult out;
    out.report = header("construct", &c);
    ReportTree res;

    PositivityReport pos = certify_positivity(f, g);
    res["alpha_min"] = pos.alpha_min;
    if (pos.alpha_min <= 0.0) {
        out.report["result"] = res;
        out.text = "construct: failed_A\n  alpha_min " + num(pos.alpha_min) + " at " + format_point(pos.worst_point) +
                   "\n";
        finish(out, "failed_A", exit_not_certified);
        return out;
    }

    std::vector<PartialRange> table = partial_sign_table(f, g);
    std::vector<AdmissibleIndex> candidates = detect_index(f, g);
    res["sign_ranges"] = sign_table_json(table);
    ReportTree cand = ReportTree::array();
    for (const auto& a : candidates) {
        ReportTree e;
        e["j"] = a.j + 1;
        e["sign_case"] = to_string(a.sign_case);
        e["sign_margin"] = a.sign_margin;
        cand.push_back(e);
    }
    res["admissible"] = cand;

    std::optional<AdmissibleIndex> chosen;
    bool admissible = true;
    if (c.force_j) {
        int j = *c.force_j - 1;
        for (const auto& a : candidates)
            if (a.j == j && (!chosen || a.sign_margin > chosen->sign_margin))
                chosen = a;
        if (!chosen) {
            chosen = forced_index(table, j);
            admissible = false;
        }
    } else {
        for (const auto& a : candidates)
            if (!chosen || a.sign_margin > chosen->sign_margin)
                chosen = a;
    }

    if (!chosen) {
        out.report["result"] = res;
        out.text = "construct: no admissible index\n" + sign_table_text(table);
        finish(out, "no_admissible_index", exit_not_certified);
        return out;
    }

    const int j = chosen->j;
    const SignCase s = chosen->sign_case;
    const double cshift = compute_c(g, j, s);
    res["j"] = j + 1;
    res["sign_case"] = to_string(s);
    res["forced"] = c.force_j.has_value();
    res["index_admissible"] = admissible;
    res["c"] = cshift;

    SearchOptions so;
    so.lambda_max = c.lambda_max;
    so.target_margin = c.target_margin;

    std::ostringstream text;
    text << "construct: j = " << j + 1 << ", sign case " << to_string(s) << ", c = " << num(cshift) << "\n";
    if (!admissible)
        text << "  warning: axis " << j + 1 << " is not admissible; the construction is not expected to certify\n";

    try {
        WeightCertificate cert = find_lambda(f, g, j, s, cshift, so);
        res["lambda"] = cert.lambda;
        res["mu0"] = cert.report.mu0;
        res["weight"] = cert.weight.expression().render();
        res["sign_margin"] = cert.sign_margin;
        res["doubling_steps"] = cert.doubling_steps;
        res["bisection_steps"] = cert.bisection_steps;
        res["report"] = condition_json(cert.report);

        const int fine = 2 * c.resolution - 1;
        ConditionReport again = check_condition(f, cert.weight, sample(c.region(), fine));
        ReportTree rv;
        rv["resolution"] = fine;
        rv["verdict"] = to_string(again.verdict);
        rv["mu0"] = again.mu0;
        res["reverify"] = rv;

        if (c.dump_grid) {
            CheckOptions keep;
            keep.keep_per_point = true;
            write_file(*c.dump_grid, per_point_csv(check_condition(f, cert.weight, g, keep), c.dim));
        }

        text << "  certified at lambda = " << num(cert.lambda) << "\n";
        text << "  weight         " << cert.weight.expression().render() << "\n";
        text << condition_text(cert.report);
        text << "  reverify       resolution " << fine << ": " << to_string(again.verdict) << ", mu0 "
             << num(again.mu0) << "\n";
        if (again.verdict != Verdict::certified)
            text << "  warning: the weight fails on the finer grid; lambda sits at this grid's threshold\n";
        out.report["result"] = res;
        out.text = text.str();
        finish(out, "certified", exit_ok);
    } catch (const ConstructionError& e) {
        if (e.kind() != ConstructionError::Kind::lambda_max_exceeded && e.kind() != ConstructionError::Kind::overflow)
            throw;
        const bool overflow = e.kind() == ConstructionError::Kind::overflow;
        res["error"] = e.what();
        res["best_lambda"] = e.best_lambda();
        if (e.best_report())
            res["best_report"] = condition_json(*e.best_report());
        text << "  " << e.what() << "\n";
        if (e.best_report())
            text << "  best failing lambda = " << num(e.best_lambda()) << "\n" << condition_text(*e.best_report());
        out.report["result"] = res;
        out.text = text.str();
        finish(out, overflow ? "overflow" : "lambda_max_exceeded", overflow ? exit_numeric : exit_not_certified);
    }
    return out;
}

RunResult cmd_curvature(const ProblemConfig& c)
{
    if (c.dim != 2 || !c.diagonal)
        throw ConfigError("curvature needs a two-dimensional diagonal coefficient matrix");
    if (c.entries.size() != 2)
        throw ConfigError("curvature needs exactly two coefficient entries");
    if (c.probe_axis < 1 || c.probe_axis > 2)
        throw ConfigError("probe_axis must be 1 or 2");
    Expression a1 = Expression::parse(c.entries[0], 2);
    Expression a2 = Expression::parse(c.entries[1], 2);

    ClassifyOptions opts;
    opts.convention = metric_convention_from_string(c.metric);
    opts.probe_axis = c.probe_axis - 1;
    opts.probe_values = c.probes;
    opts.keep_per_point = c.dump_grid.has_value();
    CurvatureReport r = classify_sign(a1, a2, c.region(), c.resolution, opts, c.constants);

    RunResult out;
    out.report = header("curvature", &c);
    ReportTree res;
    res["metric"] = to_string(r.convention);
    res["classification"] = to_string(r.classification);
    res["k_min"] = r.k_min;
    res["k_max"] = r.k_max;
    res["argmin"] = point_json(r.argmin);
    res["argmax"] = point_json(r.argmax);
    res["witness_positive"] = r.witness_positive ? point_json(*r.witness_positive) : ReportTree(nullptr);
    res["witness_negative"] = r.witness_negative ? point_json(*r.witness_negative) : ReportTree(nullptr);
    ReportTree probes = ReportTree::array();
    for (const auto& p : r.probes) {
        ReportTree e;
        e["axis"] = p.axis + 1;
        e["value"] = p.value;
        e["point_count"] = p.point_count;
        e["k_min"] = p.k_min;
        e["k_max"] = p.k_max;
        e["argmin"] = point_json(p.argmin);
        e["argmax"] = point_json(p.argmax);
        probes.push_back(e);
    }
    res["probes"] = probes;
    res["point_count"] = r.point_count;

    std::ostringstream text;
    text << "curvature: " << to_string(r.classification) << " (metric " << to_string(r.convention) << ")\n";
    text << "  k_min " << num(r.k_min) << " at " << format_point(r.argmin) << "\n";
    text << "  k_max " << num(r.k_max) << " at " << format_point(r.argmax) << "\n";
    if (r.witness_positive)
        text << "  positive witness " << format_point(*r.witness_positive) << "\n";
    if (r.witness_negative)
        text << "  negative witness " << format_point(*r.witness_negative) << "\n";

    if (c.check_w32) {
        auto mu1 = c.constants.find("mu1");
        auto mu2 = c.constants.find("mu2");
        if (mu1 == c.constants.end() || mu2 == c.constants.end())
            throw ConfigError("check_w32 needs constants mu1 and mu2");
        W32Check w = check_w32(mu1->second, mu2->second);
        ReportTree wj;
        wj["mu1_positive"] = w.mu1_positive;
        wj["mu2_positive"] = w.mu2_positive;
        wj["sum_below_two"] = w.sum_below_two;
        wj["weighted_above_two"] = w.weighted_above_two;
        wj["ok"] = w.ok();
        res["w32"] = wj;
        text << "  parameter constraints " << (w.ok() ? "hold" : "fail") << "\n";
    }

    if (c.dump_grid) {
        std::string csv = "x1,x2,k\n";
        char buf[128];
        for (const auto& s : r.per_point) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.x[0], s.x[1], s.k);
            csv += buf;
        }
        write_file(*c.dump_grid, csv);
    }

    out.report["result"] = res;
    out.text = text.str();
    finish(out, to_string(r.classification), exit_ok);
    return out;
}

RunResult cmd_rays(const ProblemConfig& c)
{
    if (c.count < 0)
        throw ConfigError("count must be non-negative");
    if (!(c.step > 0.0) || !(c.horizon > 0.0))
        throw ConfigError("step and horizon must be positive");
    CoefficientField f = field_of(c);
    Region region = c.region();
    Point center;
    if (c.center) {
        center = *c.center;
    } else {
        for (const auto& axis : c.box)
            center.push_back(0.5 * (axis.lo + axis.hi));
    }
    if (!region.contains(center))
        throw ConfigError("ray center " + format_point(center) + " lies outside the region");

    TraceOptions opts;
    opts.keep_path = c.dump_grid.has_value();
    std::vector<Point> dirs = fan_directions(c.dim, c.count);
    std::vector<RayOutcome> rays = fan(f, region, center, c.count, c.horizon, c.step, opts);

    RunResult out;
    out.report = header("rays", &c);
    ReportTree res;
    res["center"] = point_json(center);
    ReportTree list = ReportTree::array();
    int trapped = 0;
    double tmin = std::numeric_limits<double>::infinity();
    double tmax = -std::numeric_limits<double>::infinity();
    double drift = 0.0;
    std::ostringstream text;
    text << "rays: " << rays.size() << " rays from " << format_point(center) << "\n";
    text << "  ray  escape_time  min_margin  drift       step\n";
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const RayOutcome& o = rays[i];
        ReportTree e;
        e["direction"] = point_json(dirs[i]);
        e["escaped"] = o.escaped;
        e["escape_time"] = o.escaped ? ReportTree(o.escape_time) : ReportTree("trapped_until_horizon");
        e["min_boundary_distance"] = o.min_boundary_distance;
        e["max_drift"] = o.max_drift;
        e["step_used"] = o.step_used;
        e["halvings"] = o.halvings;
        e["end"] = point_json(o.end.x);
        list.push_back(e);
        if (o.escaped) {
            tmin = std::min(tmin, o.escape_time);
            tmax = std::max(tmax, o.escape_time);
        } else {
            ++trapped;
        }
        drift = std::max(drift, o.max_drift);
        char line[160];
        std::snprintf(line, sizeof line, "  %3zu  %-11s  %-10.4g  %-10.3g  %.4g\n", i + 1,
                      o.escaped ? num(o.escape_time).c_str() : "trapped", o.min_boundary_distance, o.max_drift,
                      o.step_used);
        text << line;
    }
    res["rays"] = list;
    ReportTree summary;
    summary["count"] = rays.size();
    summary["trapped"] = trapped;
    summary["escape_time_min"] = trapped == static_cast<int>(rays.size()) ? ReportTree(nullptr) : ReportTree(tmin);
    summary["escape_time_max"] = trapped == static_cast<int>(rays.size()) ? ReportTree(nullptr) : ReportTree(tmax);
    summary["max_drift"] = drift;
    res["summary"] = summary;

    if (c.dump_grid) {
        std::string csv = "ray,sample";
        for (int k = 1; k <= c.dim; ++k)
            csv += ",x" + std::to_string(k);
        csv += "\n";
        char buf[64];
        for (std::size_t i = 0; i < rays.size(); ++i) {
            for (std::size_t s = 0; s < rays[i].path.size(); ++s) {
                csv += std::to_string(i + 1) + "," + std::to_string(s);
                for (double v : rays[i].path[s]) {
                    std::snprintf(buf, sizeof buf, ",%.17g", v);
                    csv += buf;
                }
                csv += "\n";
            }
        }
        write_file(*c.dump_grid, csv);
    }

    out.report["result"] = res;
    out.text = text.str();
    finish(out, trapped == 0 ? "all_escaped" : "some_trapped", exit_ok);
    return out;
}

RunResult run_guarded(const std::string& command, const ProblemConfig* c, RunResult (*fn)(const ProblemConfig&))
{
    auto start = std::chrono::steady_clock::now();
    RunResult out;
    auto fail = [&](const char* kind, const std::string& message, int code, const Point* where) {
        out.report = header(command, c);
        ReportTree e;
        e["kind"] = kind;
        e["message"] = message;
        if (where && !where->empty())
            e["point"] = point_json(*where);
        out.report["error"] = e;
        out.text = command + ": " + kind + " error: " + message + "\n";
        finish(out, "error", code);
    };
    try {
        out = fn(*c);
    } catch (const ConfigError& e) {
        fail("config", e.what(), exit_config, nullptr);
    } catch (const ParseError& e) {
        fail("config", e.what(), exit_config, nullptr);
    } catch (const DomainError& e) {
        fail("domain", e.what(), exit_numeric, &e.where());
    } catch (const StepCollapse& e) {
        fail("numeric", e.what(), exit_numeric, nullptr);
    } catch (const ConstructionError& e) {
        fail("config", e.what(), exit_config, nullptr);
    } catch (const Error& e) {
        fail("config", e.what(), exit_config, nullptr);
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out.report["duration_s"] = elapsed.count();
    return out;
}

// Bundled examples --------------------------------------------------------

const std::vector<BundledExample>& bundled_examples()
{
    static const std::vector<BundledExample> list = {
        {"classical-multiplier", "identity coefficients, d = |x|^2/2 on a disk away from the origin",
         R"cfg(# Classical multiplier on the disk centred at (2, 0) with radius 1.
[problem]
dim = 2
A.diagonal = true
A.entries = ["1", "1"]
weight = "(x1^2 + x2^2)/2"

[region]
box = [[1, 3], [-1, 1]]
constraints = ["(x1 - 2)^2 + x2^2 - 1"]

[options]
resolution = 33
)cfg"},
        {"disk-trap", "a = 1 + x1^2 + x2^2 on the disk of radius sqrt(2): no admissible index",
         R"cfg(# Isotropic coefficient with a minimum at the centre of the disk.
[problem]
dim = 2
A.diagonal = true
A.entries = ["1 + x1^2 + x2^2", "1 + x1^2 + x2^2"]
weight = "(x1^2 + x2^2)/2"

[region]
box = [[-1.4142135623730951, 1.4142135623730951], [-1.4142135623730951, 1.4142135623730951]]
constraints = ["x1^2 + x2^2 - 2"]

[options]
resolution = 33
center = [0, 0]
count = 32
horizon = 20
step = 0.01
)cfg"},
        {"curvature-signchange", "a1 = exp(mu1 x1), a2 = exp(-mu2 x1^2): curvature changes sign",
         R"cfg(# Diagonal metric whose curvature is positive near x1 = 1 and negative near x1 = 3.
[problem]
dim = 2
A.diagonal = true
A.entries = ["exp(mu1*x1)", "exp(-mu2*x1^2)"]

[constants]
mu1 = 0.5
mu2 = 0.1

[region]
box = [[0.7752551286084111, 3.224744871391589], [-1.224744871391589, 1.224744871391589]]
constraints = ["(x1 - 2)^2 + x2^2 - 1.5"]

[options]
resolution = 33
metric = "coefficient"
probe_axis = 1
probes = [1, 3]
check_w32 = true
)cfg"},
        {"isotropic-exp", "a1 = a2 = exp(x1 + x2) on the disk centred at (2, 0)",
         R"cfg(# Both coefficients increase along x1, so the positive sign case applies.
[problem]
dim = 2
A.diagonal = true
A.entries = ["exp(x1 + x2)", "exp(x1 + x2)"]

[region]
box = [[1, 3], [-1, 1]]
constraints = ["(x1 - 2)^2 + x2^2 - 1"]

[options]
resolution = 33
)cfg"},
        {"cubic-exp", "a1 = a2 = exp(x1^3 + x2^3) on the disk centred at (2, 2)",
         R"cfg(# The disk sits in the positive quadrant so every partial keeps its sign.
[problem]
dim = 2
A.diagonal = true
A.entries = ["exp(x1^3 + x2^3)", "exp(x1^3 + x2^3)"]

[region]
box = [[1, 3], [1, 3]]
constraints = ["(x1 - 2)^2 + (x2 - 2)^2 - 1"]

[options]
resolution = 33
)cfg"},
        {"flat-metric", "constant coefficients: curvature vanishes",
         R"cfg([problem]
dim = 2
A.diagonal = true
A.entries = ["2", "3"]

[region]
box = [[0, 1], [0, 1]]

[options]
resolution = 17
)cfg"},
        {"identity-rays", "straight rays from the centre of the unit disk",
         R"cfg([problem]
dim = 2
A.diagonal = true
A.entries = ["1", "1"]

[region]
box = [[-1, 1], [-1, 1]]
constraints = ["x1^2 + x2^2 - 1"]

[options]
center = [0, 0]
count = 8
horizon = 5
step = 0.01
)cfg"},
    };
    return list;
}

namespace {

struct Step {
    const char* command;
    RunResult (*fn)(const ProblemConfig&);
    std::string expected; // "*" accepts any verdict other than "error"
    std::function<bool(const ReportTree&)> extra;
};

std::vector<Step> steps_for(const std::string& name)
{
    if (name == "classical-multiplier")
        return {{"verify", cmd_verify, "certified", nullptr}};
    if (name == "disk-trap")
        return {{"construct", cmd_construct, "no_admissible_index", nullptr},
                {"verify", cmd_verify, "*", nullptr},
                {"rays", cmd_rays, "*", nullptr}};
    if (name == "curvature-signchange")
        return {{"curvature", cmd_curvature, "sign_changing",
                 [](const ReportTree& r) { return r["result"]["w32"]["ok"].get<bool>(); }}};
    if (name == "isotropic-exp" || name == "cubic-exp")
        return {{"construct", cmd_construct, "certified", nullptr}};
    if (name == "flat-metric")
        return {{"curvature", cmd_curvature, "degenerate", nullptr}};
    if (name == "identity-rays")
        return {{"rays", cmd_rays, "all_escaped", [](const ReportTree& r) {
                     const ReportTree& s = r["result"]["summary"];
                     return std::abs(s["escape_time_max"].get<double>() - s["escape_time_min"].get<double>()) <= 1e-6;
                 }}};
    return {};
}

} // namespace

RunResult cmd_examples(const std::string& name, int resolution)
{
    auto start = std::chrono::steady_clock::now();
    RunResult out;
    out.report = header("examples", nullptr);
    out.report["name"] = name;

    std::vector<const BundledExample*> selected;
    for (const auto& ex : bundled_examples())
        if (name == "all" || ex.name == name)
            selected.push_back(&ex);
    if (selected.empty()) {
        std::string names;
        for (const auto& ex : bundled_examples())
            names += (names.empty() ? "" : ", ") + ex.name;
        out.report["error"] = ReportTree{{"kind", "config"}, {"message", "unknown example '" + name + "'"}};
        out.text = "examples: unknown example '" + name + "'; available: " + names + ", all\n";
        finish(out, "error", exit_config);
        return out;
    }

    bool all_match = true;
    ReportTree runs = ReportTree::array();
    std::ostringstream text;
    for (const BundledExample* ex : selected) {
        ProblemConfig cfg = parse_config(ex->config);
        if (resolution > 0)
            cfg.resolution = resolution;
        ReportTree entry;
        entry["name"] = ex->name;
        entry["description"] = ex->description;
        ReportTree steps = ReportTree::array();
        text << "== " << ex->name << ": " << ex->description << "\n";
        for (const Step& st : steps_for(ex->name)) {
            RunResult r = run_guarded(st.command, &cfg, st.fn);
            std::string observed = r.report["verdict"].get<std::string>();
            bool match = st.expected == "*" ? observed != "error" : observed == st.expected;
            if (match && st.extra)
                match = st.extra(r.report);
            all_match = all_match && match;
            ReportTree s;
            s["command"] = st.command;
            s["expected"] = st.expected;
            s["observed"] = observed;
            s["match"] = match;
            s["report"] = r.report;
            steps.push_back(s);
            text << r.text << "  [" << (match ? "as expected" : "UNEXPECTED") << "]\n";
        }
        entry["steps"] = steps;
        runs.push_back(entry);
    }
    out.report["examples"] = runs;
    out.text = text.str();
    finish(out, all_match ? "all_match" : "mismatch", all_match ? exit_ok : exit_not_certified);
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out.report["duration_s"] = elapsed.count();
    return out;
}

} // namespace wavecert
