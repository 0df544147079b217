#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <bellsim/perspectives.hpp>
#include <bellsim/scenario.hpp>

namespace bellsim::cli {

enum ExitCode : int { ok = 0, usage = 1, verification_failed = 2, starvation = 3 };

struct RunConfig {
    std::uint64_t n_runs = 20000;
    std::uint64_t seed = 42;
    std::optional<double> tau;
    double dt_divisor = 2000.0;
    /// Empty writes to the command's output stream.
    std::string out;
    std::string format = "json";
    bool verify = false;
    std::vector<double> checkpoints;
    /// JSON scenario file; overrides `scenario` when set.
    std::string config_path;
    std::string scenario = "fr";
    std::uint64_t max_starvation = 10;
    unsigned threads = 0;
    OutcomeWeighting weighting = OutcomeWeighting::records_definite;
};

/// Throws Error if a field is out of range.
void validate(const RunConfig& config);

/// The scenario selected by config, with tau applied.
Scenario load_scenario(const RunConfig& config);

int cmd_table(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify_states(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace bellsim::cli
