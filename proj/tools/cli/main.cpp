#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

void add_run_options(CLI::App& cmd, bellsim::cli::RunConfig& c, std::string& weighting)
{
    cmd.add_option("--tau", c.tau, "Measurement duration in (0, 1)");
    cmd.add_option("--dt-divisor", c.dt_divisor, "Base step is tau / divisor")->check(CLI::Range(100.0, 1e9));
    cmd.add_option("--out", c.out, "Output file (default stdout)");
    cmd.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd.add_flag("--verify", c.verify, "Check results and exit 2 on mismatch");
    cmd.add_option("--checkpoints", c.checkpoints, "Comma-separated checkpoint times")->delimiter(',');
    cmd.add_option("--config", c.config_path, "Scenario JSON file");
    cmd.add_option("--scenario", c.scenario, "Built-in scenario: fr, rotation, free");
    cmd.add_option("--weighting", weighting, "Agent outcome weighting: records_definite or pilot_born")
        ->check(CLI::IsMember({"records_definite", "pilot_born"}));
}

} // namespace

int main(int argc, char** argv)
{
    using namespace bellsim::cli;
    CLI::App app{"Bell-type beable dynamics on labeled tensor-product spaces"};
    app.require_subcommand(1);
    RunConfig config;
    std::string weighting = "records_definite";

    auto* table = app.add_subcommand("table", "Per-agent (x, w) prediction table");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble of real-state trajectories");
    auto* oracle = app.add_subcommand("oracle", "Master equation against the pilot's Born weights");
    auto* verify = app.add_subcommand("verify-states", "Evolved pilots against hand-built references");
    for (auto* cmd : {table, simulate, oracle, verify}) {
        add_run_options(*cmd, config, weighting);
    }
    for (auto* cmd : {simulate}) {
        cmd->add_option("--n", config.n_runs, "Number of trajectories")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", config.seed, "Master seed");
        cmd->add_option("--max-starvation", config.max_starvation, "Starvation events tolerated before exit 3");
        cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ExitCode::usage;
    }

    try {
        config.weighting = bellsim::parse_weighting(weighting);
        if (table->parsed()) {
            return cmd_table(config, std::cout, std::cerr);
        }
        if (simulate->parsed()) {
            return cmd_simulate(config, std::cout, std::cerr);
        }
        if (oracle->parsed()) {
            return cmd_oracle(config, std::cout, std::cerr);
        }
        return cmd_verify_states(config, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "bellsim: " << e.what() << '\n';
        return ExitCode::usage;
    }
}
