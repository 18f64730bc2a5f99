#pragma once

// Subcommands shared by the command-line tool and the tests.
//
// Exit codes: 0 success / certified, 2 honest negative (not certified),
// 3 configuration error, 4 numeric or domain error.

#include "wavecert/config.hpp"
#include "wavecert/report.hpp"

#include <string>
#include <vector>

namespace wavecert {

inline constexpr const char* tool_version = "1.0.0";

enum ExitCode : int { exit_ok = 0, exit_not_certified = 2, exit_config = 3, exit_numeric = 4 };

struct RunResult {
    ReportTree report; // machine-readable document
    std::string text;  // human-readable summary
    int exit_code = exit_ok;
};

RunResult cmd_verify(const ProblemConfig& c);
RunResult cmd_construct(const ProblemConfig& c);
RunResult cmd_curvature(const ProblemConfig& c);
RunResult cmd_rays(const ProblemConfig& c);

/// Runs `fn`, mapping library exceptions onto error reports and exit codes.
RunResult run_guarded(const std::string& command, const ProblemConfig* c, RunResult (*fn)(const ProblemConfig&));

struct BundledExample {
    std::string name;
    std::string description;
    std::string config; // config file text
};
const std::vector<BundledExample>& bundled_examples();

/// Runs one bundled example (or every example for "all"). Exit code 0 iff
/// every observed verdict matches the expected one. Unknown names give
/// exit_config with the list of available names. `resolution` > 0 overrides
/// the bundled resolution.
RunResult cmd_examples(const std::string& name, int resolution = 0);

} // namespace wavecert
