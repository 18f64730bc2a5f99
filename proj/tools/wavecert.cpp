#include "wavecert/commands.hpp"
#include "wavecert/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace wavecert;

struct Common {
    std::string config;
    int resolution = 0;
    std::string dump_grid;
    int threads = 0;
    std::string json;
};

void add_common(CLI::App* sub, Common& c, bool needs_config)
{
    auto* opt = sub->add_option("--config", c.config, "problem configuration file");
    if (needs_config)
        opt->required();
    sub->add_option("--resolution", c.resolution, "grid points per axis (overrides the config)")
        ->check(CLI::Range(2, 100000));
    sub->add_option("--dump-grid", c.dump_grid, "write per-point values as CSV");
    sub->add_option("--threads", c.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--json", c.json, "write the machine-readable report ('-' for stdout)");
}

int emit(const RunResult& r, const Common& c)
{
    if (c.json == "-") {
        std::cout << write_report(r.report);
    } else {
        std::cout << r.text;
        if (!c.json.empty()) {
            std::ofstream f(c.json, std::ios::binary);
            if (!f) {
                std::cerr << "cannot write '" << c.json << "'\n";
                return exit_config;
            }
            f << write_report(r.report);
        }
    }
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiplier-condition certificates for variable-coefficient wave equations"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    Common common;
    std::optional<int> force_j;
    std::optional<double> lambda_max;
    std::optional<double> target_margin;
    std::optional<std::string> metric;
    std::optional<std::vector<double>> center;
    std::optional<int> count;
    std::optional<double> horizon;
    std::optional<double> step;
    std::string example_name = "all";
    bool print_config = false;

    auto* verify = app.add_subcommand("verify", "check a given weight against the multiplier condition");
    add_common(verify, common, true);

    auto* construct = app.add_subcommand("construct", "search for an exponential weight");
    add_common(construct, common, true);
    construct->add_option("--force-j", force_j, "use this axis (1-based) even if another has a larger margin");
    construct->add_option("--lambda-max", lambda_max, "largest lambda tried");
    construct->add_option("--target-margin", target_margin, "required mu0 as a multiple of alpha_min");

    auto* curvature = app.add_subcommand("curvature", "classify the sign of the Gaussian curvature (2D)");
    add_common(curvature, common, true);
    curvature->add_option("--metric", metric, "coefficient or inverse")
        ->check(CLI::IsMember({"coefficient", "inverse"}));

    auto* rays = app.add_subcommand("rays", "trace a fan of bicharacteristics");
    add_common(rays, common, true);
    rays->add_option("--center", center, "launch point")->expected(1, -1);
    rays->add_option("--count", count, "number of rays");
    rays->add_option("--horizon", horizon, "final time");
    rays->add_option("--step", step, "initial integration step");

    auto* examples = app.add_subcommand("examples", "run bundled examples");
    add_common(examples, common, false);
    examples->add_option("name", example_name, "example name or 'all'");
    examples->add_flag("--print-config", print_config, "print the bundled configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    set_thread_count(common.threads);

    if (examples->parsed()) {
        if (print_config) {
            for (const auto& ex : bundled_examples())
                if (ex.name == example_name) {
                    std::cout << ex.config;
                    return exit_ok;
                }
            std::cerr << "unknown example '" << example_name << "'\n";
            return exit_config;
        }
        return emit(cmd_examples(example_name, common.resolution), common);
    }

    ProblemConfig cfg;
    try {
        cfg = load_config(common.config);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    if (common.resolution > 0)
        cfg.resolution = common.resolution;
    if (!common.dump_grid.empty())
        cfg.dump_grid = common.dump_grid;
    if (force_j)
        cfg.force_j = *force_j;
    if (lambda_max)
        cfg.lambda_max = *lambda_max;
    if (target_margin)
        cfg.target_margin = *target_margin;
    if (metric)
        cfg.metric = *metric;
    if (center)
        cfg.center = *center;
    if (count)
        cfg.count = *count;
    if (horizon)
        cfg.horizon = *horizon;
    if (step)
        cfg.step = *step;

    if (verify->parsed())
        return emit(run_guarded("verify", &cfg, cmd_verify), common);
    if (construct->parsed())
        return emit(run_guarded("construct", &cfg, cmd_construct), common);
    if (curvature->parsed())
        return emit(run_guarded("curvature", &cfg, cmd_curvature), common);
    return emit(run_guarded("rays", &cfg, cmd_rays), common);
}
