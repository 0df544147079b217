#include "bellsim/perspectives.hpp"

#include <cmath>

namespace bellsim {

namespace {

constexpr double negligible_branch = 1e-14;

struct Branch {
    double p;
    StateVector psi; // normalized
};

const TableConfig& table_config(const Scenario& sc)
{
    if (!sc.config.table) {
        throw Error("scenario has no (x, w) table configuration");
    }
    if (sc.config.table->labels.size() != 2) {
        throw Error("table needs exactly two labels");
    }
    return *sc.config.table;
}

double table_time(const Scenario& sc)
{
    if (sc.schedule.segments().empty()) {
        throw Error("scenario has no measurements");
    }
    return sc.schedule.segments().back().t_end;
}

const Segment& agent_segment(const Scenario& sc, std::string_view agent, std::size_t* index = nullptr)
{
    const auto k = sc.schedule.find_agent(agent);
    if (!k || !sc.schedule.segments()[*k].pointer) {
        throw Error("agent '" + std::string(agent) + "' does not measure in this scenario");
    }
    if (index) {
        *index = *k;
    }
    return sc.schedule.segments()[*k];
}

// Projection onto one label of a factor, unnormalized.
StateVector project(const StateVector& psi, std::size_t factor, std::size_t label)
{
    const auto& space = *psi.space();
    Eigen::VectorXcd out = psi.amplitudes();
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        if (space.digit(b, factor) != label) {
            out[static_cast<Eigen::Index>(b)] = 0.0;
        }
    }
    return StateVector(psi.space(), std::move(out));
}

// Non-ready labels of a segment's pointer.
std::vector<std::size_t> outcome_labels(const Scenario& sc, const Segment& seg)
{
    std::vector<std::size_t> labels;
    const auto& f = sc.space->factor(*seg.pointer);
    for (std::size_t l = 0; l < f.dimension(); ++l) {
        if (l != seg.ready_label) {
            labels.push_back(l);
        }
    }
    return labels;
}

} // namespace

const TableRow& PredictionTable::row(std::string_view agent) const
{
    for (const auto& [name, r] : rows) {
        if (name == agent) {
            return r;
        }
    }
    throw Error("no table row for agent '" + std::string(agent) + "'");
}

OutcomeWeighting parse_weighting(std::string_view text)
{
    if (text == "records_definite") {
        return OutcomeWeighting::records_definite;
    }
    if (text == "pilot_born") {
        return OutcomeWeighting::pilot_born;
    }
    throw Error("unknown outcome weighting '" + std::string(text) + "'");
}

std::string_view to_string(OutcomeWeighting w)
{
    return w == OutcomeWeighting::records_definite ? "records_definite" : "pilot_born";
}

std::vector<std::pair<std::string, double>> outcome_weights(const Scenario& sc, std::string_view agent,
                                                            OutcomeWeighting weighting)
{
    std::size_t index = 0;
    const auto& seg = agent_segment(sc, agent, &index);
    const auto labels = outcome_labels(sc, seg);
    const auto& factor = sc.space->factor(*seg.pointer);
    std::vector<std::pair<std::string, double>> out;

    if (weighting == OutcomeWeighting::pilot_born) {
        const auto psi = sc.schedule.evolve(sc.initial_state, sc.schedule.t_start(), seg.t_end);
        for (const auto l : labels) {
            out.emplace_back(factor.labels[l], project(psi, *seg.pointer, l).norm_squared());
        }
        return out;
    }

    // Collapse every measurement up to and including the agent's, in order.
    std::vector<Branch> branches{{1.0, sc.initial_state}};
    double now = sc.schedule.t_start();
    for (std::size_t k = 0; k <= index; ++k) {
        const auto& s = sc.schedule.segments()[k];
        std::vector<Branch> next;
        for (auto& b : branches) {
            const auto psi = sc.schedule.evolve(b.psi, now, s.t_end);
            if (!s.pointer) {
                next.push_back({b.p, psi});
                continue;
            }
            for (const auto l : outcome_labels(sc, s)) {
                auto part = project(psi, *s.pointer, l);
                const double q = part.norm_squared();
                if (b.p * q > negligible_branch) {
                    next.push_back({b.p * q, part.normalized()});
                }
            }
        }
        branches = std::move(next);
        now = s.t_end;
    }
    for (const auto l : labels) {
        double p = 0.0;
        for (const auto& b : branches) {
            // Each branch now carries a definite record for this agent.
            if (project(b.psi, *seg.pointer, l).norm_squared() > 0.5) {
                p += b.p;
            }
        }
        out.emplace_back(factor.labels[l], p);
    }
    return out;
}

TableRow table_marginal(const Scenario& sc, const StateVector& state)
{
    const auto& t = table_config(sc);
    const auto& space = *sc.space;
    const auto fx = space.factor_index(t.x);
    const auto fw = space.factor_index(t.w);
    const std::array<std::size_t, 2> lx{space.label_index(fx, t.labels[0]), space.label_index(fx, t.labels[1])};
    const std::array<std::size_t, 2> lw{space.label_index(fw, t.labels[0]), space.label_index(fw, t.labels[1])};
    TableRow row{};
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const auto dx = space.digit(b, fx);
        const auto dw = space.digit(b, fw);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                if (dx == lx[i] && dw == lw[j]) {
                    row[2 * i + j] += std::norm(state[b]);
                }
            }
        }
    }
    return row;
}

TableRow agent_prediction(const Scenario& sc, std::string_view agent, OutcomeWeighting weighting)
{
    const auto& seg = agent_segment(sc, agent);
    const double t_end = table_time(sc);
    const auto psi = sc.schedule.evolve(sc.initial_state, sc.schedule.t_start(), seg.t_end);
    const auto weights = outcome_weights(sc, agent, weighting);
    const auto& factor = sc.space->factor(*seg.pointer);

    TableRow row{};
    for (const auto& [label, p] : weights) {
        if (p < negligible_branch) {
            continue;
        }
        auto branch = project(psi, *seg.pointer, sc.space->label_index(*seg.pointer, label));
        if (branch.norm_squared() < negligible_branch) {
            throw Error("agent '" + std::string(agent) + "' assigns weight to outcome '" + label + "' of " +
                        factor.id + " that the state does not contain");
        }
        const auto final_state = sc.schedule.evolve(branch.normalized(), seg.t_end, t_end);
        const auto m = table_marginal(sc, final_state);
        for (std::size_t i = 0; i < 4; ++i) {
            row[i] += p * m[i];
        }
    }
    return row;
}

TableRow gods_eye_prediction(const Scenario& sc)
{
    return table_marginal(sc, sc.schedule.evolve(sc.initial_state, sc.schedule.t_start(), table_time(sc)));
}

PredictionTable full_table(const Scenario& sc, OutcomeWeighting weighting)
{
    PredictionTable table;
    const auto& segs = sc.schedule.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (!segs[k].pointer || segs[k].agent.empty()) {
            continue;
        }
        const bool last = k + 1 == segs.size();
        table.rows.emplace_back(segs[k].agent,
                                last ? gods_eye_prediction(sc) : agent_prediction(sc, segs[k].agent, weighting));
    }
    return table;
}

} // namespace bellsim
