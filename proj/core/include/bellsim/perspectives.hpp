#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellsim/scenario.hpp"

namespace bellsim {

/// Probabilities of (x, w) = (l0,l0), (l0,l1), (l1,l0), (l1,l1) for the table labels l0, l1.
using TableRow = std::array<double, 4>;

struct PredictionTable {
    std::vector<std::pair<std::string, TableRow>> rows;

    const TableRow& row(std::string_view agent) const;
};

/*!
 * How an agent weighs the branches of its own measurement.
 *
 * records_definite: every earlier measuring agent's record is taken as a
 * definite fact, so the agent's outcome probabilities follow from collapsing
 * each earlier measurement in turn. pilot_born: Born weights of the
 * uncollapsed state at the end of the agent's measurement.
 *
 * In both cases each branch continues from the uncollapsed state projected
 * onto the agent's own record and renormalized.
 */
enum class OutcomeWeighting { records_definite, pilot_born };

OutcomeWeighting parse_weighting(std::string_view text);
std::string_view to_string(OutcomeWeighting w);

/// Outcome label -> probability for the agent's own measurement.
std::vector<std::pair<std::string, double>> outcome_weights(const Scenario& scenario, std::string_view agent,
                                                            OutcomeWeighting weighting);

/// Collapse at the agent's measurement, unitary evolution elsewhere; (x, w) read
/// at the end of the last segment. Throws Error if the agent does not measure.
TableRow agent_prediction(const Scenario& scenario, std::string_view agent,
                          OutcomeWeighting weighting = OutcomeWeighting::records_definite);

/// Fully unitary evolution; (x, w) marginals at the end of the last segment.
TableRow gods_eye_prediction(const Scenario& scenario);

/// (x, w) marginals of an arbitrary state under the scenario's table config.
TableRow table_marginal(const Scenario& scenario, const StateVector& state);

/// One row per measuring agent, in schedule order; the last agent uses gods_eye_prediction.
PredictionTable full_table(const Scenario& scenario, OutcomeWeighting weighting = OutcomeWeighting::records_definite);

} // namespace bellsim
