#pragma once

// Experiment commands behind the mkzfrac executable. Each command reads one
// config, writes its tables and plots into an output directory and returns the
// process exit code.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "mkzfrac/fractal.hpp"
#include "mkzfrac/functions.hpp"

namespace mkzfrac::app {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kNonConvergence = 3,
    kValidationFailure = 4,
    kBoundFailure = 5,
};

/// Germ plus its closed form when the config names one.
struct GermSource {
    GridFunction samples;
    bool analytic = false;
    Germ germ;
};

/// Named germ from `<prefix>.name` and `<prefix>.params` on the given grid.
GermSource build_germ(const Config& cfg, const std::string& prefix, IntervalSpec interval, std::size_t m);
FractalSpec build_spec(const Config& cfg);
std::function<double(int)> q_rule(const Config& cfg, const std::string& key, const std::string& fallback);

int cmd_solve(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_constrain(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_converge(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_dimension(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_muntz(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_lp(const Config& cfg, const std::filesystem::path& out, std::ostream& log);

const std::vector<std::string>& command_names();

/// Runs a command by name and maps errors to exit codes, printing messages to `err`.
int run_command(const std::string& name, const Config& cfg, const std::filesystem::path& out, std::ostream& log,
                std::ostream& err);

}  // namespace mkzfrac::app
