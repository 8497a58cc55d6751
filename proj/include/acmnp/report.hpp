#pragma once

// Command pipelines behind the command-line tool and their canonical
// structured output.

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "acmnp/random_structure.hpp"

namespace acmnp {

#ifndef ACMNP_VERSION
#define ACMNP_VERSION "unversioned"
#endif

inline constexpr const char* kToolVersion = ACMNP_VERSION;

enum class Command { Spin, Classify, EtaEinstein, KMuNu, Verify, Orbit, Report, Random };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

struct CommandResult {
    nlohmann::json tree;
    std::string text;  // human-readable summary, one item per line
    int exit_code = 0; // 0 all checks pass, 1 a check failed or a gate refused
};

// Thrown for input problems detected while running a command (exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CommandResult run_command(Command c, const Manifest& mf, const Overrides& ov = {});

struct RandomRun {
    std::uint64_t seed = 1;
    double amplitude = 0.1;
    RandomFamily family = RandomFamily::General;
};

// Identity suite and gauge covariance on random_structure(seed, amplitude).
CommandResult run_random(const RandomRun& rr, const Overrides& ov = {});

// Sorted keys, floats with 17 significant digits, non-finite numbers as null.
std::string canonical_json(const nlohmann::json& j);

}  // namespace acmnp
