#pragma once

// Problem configuration files.
//
//   # comment
//   [problem]
//   dim = 2
//   A.diagonal = true
//   A.entries = ["exp(x1 + x2)", "exp(x1 + x2)"]
//   weight = "(x1^2 + x2^2)/2"          # optional
//
//   [constants]
//   mu1 = 0.5
//
//   [region]
//   box = [[1, 3], [-1, 1]]
//   constraints = ["(x1 - 2)^2 + x2^2 - 1"]
//   margin = 0
//
//   [options]
//   resolution = 33
//   ...
//
// Values are numbers, booleans, double-quoted strings or arrays of values.
// Unknown sections and keys are errors.

#include "wavecert/domain.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wavecert {

struct ProblemConfig {
    int dim = 0;
    bool diagonal = true;
    std::vector<std::string> entries;
    std::optional<std::string> weight;
    ConstantTable constants;

    std::vector<Interval> box;
    std::vector<std::string> constraints;
    double margin = 0.0;

    int resolution = 33;
    double lambda_max = 1048576.0;
    double target_margin = 0.0;
    std::optional<int> force_j; // 1-based
    double horizon = 20.0;
    double step = 0.01;
    std::optional<Point> center;
    int count = 32;
    std::string metric = "coefficient";
    int probe_axis = 1; // 1-based
    std::vector<double> probes;
    bool check_w32 = false;

    // Runtime only; never read from files.
    std::optional<std::string> dump_grid;

    Region region() const;
    /// Stable-order echo of every setting.
    nlohmann::ordered_json to_json() const;
};

/// Throws ConfigError with a line number on malformed input, unknown keys or
/// missing required keys (dim, A.entries, region.box).
ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::string& path);

} // namespace wavecert
