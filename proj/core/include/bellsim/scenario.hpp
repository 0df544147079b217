#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellsim/measurement.hpp"
#include "bellsim/schedule.hpp"

namespace bellsim {

/*!
 * Declarative description of a scenario, read from and written to JSON.
 *
 * Top-level keys: "name", "tau", "t_start" (optional), "t_final" (optional),
 * "factors", "beables", "initial_state", "segments", "events", "table",
 * "checkpoints". Amplitudes are a number, a [re, im] pair, or an expression
 * string such as "sqrt(1/3)", "-1/sqrt(2)" or "0.5*i".
 *
 * A segment has builder "rotation" (pointer, ready, outcomes) or "matrix"
 * (factors, hamiltonian rows). Its interval is [end - duration, end], or
 * [start, start + duration] when "start" is given; duration defaults to tau.
 */
struct SegmentConfig {
    std::string builder = "rotation";
    std::string agent;
    std::optional<double> start;
    std::optional<double> end;
    std::optional<double> duration;
    // rotation
    std::string pointer;
    std::string ready = "0";
    std::vector<MeasurementRotation::Outcome> outcomes;
    // matrix
    std::vector<std::string> matrix_factors;
    Eigen::MatrixXcd matrix;
};

struct EventConfig {
    std::string builder = "controlled_preparation";
    std::string label;
    double time = 0.0;
    std::string control;
    std::string target;
    ControlledBlocks blocks;
};

/// Which pointers form the (x, w) prediction table, and with which labels.
struct TableConfig {
    std::string x;
    std::string w;
    std::vector<std::string> labels{"ok", "fail"};
};

struct ScenarioConfig {
    std::string name;
    double tau = 0.5;
    std::optional<double> t_start;
    std::optional<double> t_final;
    std::vector<Factor> factors;
    std::vector<std::string> beables;
    PartialState initial_state;
    std::vector<SegmentConfig> segments;
    std::vector<EventConfig> events;
    std::optional<TableConfig> table;
    std::vector<double> checkpoints;
};

/// A fully built scenario.
struct Scenario {
    ScenarioConfig config;
    SpacePtr space;
    BeableSpec spec;
    Schedule schedule;
    StateVector initial_state;
    /// Checkpoints from the config, or t_start, every segment end and t_final.
    std::vector<double> checkpoints;
};

/// Parses an amplitude expression: numbers, i, + - * /, parentheses and sqrt().
Complex parse_amplitude(std::string_view text);

/// Throws Error on malformed input or unknown keys.
ScenarioConfig parse_scenario_config(std::string_view json_text);
/// Canonical JSON; parse_scenario_config(to_json(c)) reproduces c.
std::string to_json(const ScenarioConfig& config, int indent = 2);

/// Built-in scenarios: "fr", "rotation", "free".
ScenarioConfig builtin_config(std::string_view name);
std::vector<std::string> builtin_names();

/// Sets tau and makes every segment last tau, keeping its anchor time.
ScenarioConfig with_tau(ScenarioConfig config, double tau);

Scenario build_scenario(const ScenarioConfig& config);

} // namespace bellsim
