#pragma once

#include "critlog/io.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace critlog {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_gate = 2, exit_verification = 3 };

/// Bad configuration or violated hypothesis; the message names the key.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    ProblemParams params;
    SolverOptions solver;
    BoxSpec box;
    std::optional<real> eps;  // defaults to q - 2
    std::vector<real> n_list = default_bubble_scales();
    std::optional<std::string> out;
    /// Keyed by parameter name (N, mu, nu, lambda, theta, q, R).
    std::map<std::string, std::vector<real>> sweep;
    bool sweep_solve = false;
};

/// Sweepable parameters in the order that defines row order.
const std::vector<std::string>& sweep_parameters();

/// Every key accepted in a config file.
const std::vector<std::string>& config_keys();

/// Reads a flat JSON object. Unknown keys, wrong types and values outside the
/// owning module's preconditions throw config_error naming the key.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Throws config_error unless the mountain-pass theorem covers p:
/// N <= 5 when ν <= 0, and q < 2* - 1 when ν < 0. Exploring lifts both for N >= 6.
void check_hypotheses(const ProblemParams& p, bool explore);

/// Returns p with one sweep parameter replaced.
ProblemParams with_parameter(ProblemParams p, const std::string& name, real value);

struct CommandContext {
    std::filesystem::path out_dir = ".";
    bool explore = false;
    std::ostream* log = nullptr;  // human-readable summary, may be null
};

int cmd_regions(const RunConfig& cfg, const CommandContext& ctx);
int cmd_solve(const RunConfig& cfg, const CommandContext& ctx);
int cmd_verify(const RunConfig& cfg, const CommandContext& ctx);
int cmd_sweep(const RunConfig& cfg, const CommandContext& ctx);

/// Entry point behind the critlog executable.
int run_cli(int argc, char** argv);

}  // namespace critlog
