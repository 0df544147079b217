#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include <bellsim/ensemble.hpp>
#include <bellsim/fr_experiment.hpp>
#include <bellsim/master_equation.hpp>

namespace bellsim::cli {

using nlohmann::ordered_json;

namespace {

constexpr double table_tolerance = 1e-9;
constexpr double oracle_tolerance = 1e-3;
constexpr double state_tolerance = 1e-8;

void emit(const RunConfig& config, const std::string& text, std::ostream& out)
{
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
        throw Error("cannot open output file '" + config.out + "'");
    }
    file << text;
    if (!file) {
        throw Error("failed writing '" + config.out + "'");
    }
}

ordered_json metadata(const char* command, const RunConfig& config, const Scenario& sc)
{
    ordered_json m;
    m["command"] = command;
    m["seed"] = config.seed;
    m["n_runs"] = config.n_runs;
    m["tau"] = sc.config.tau;
    m["dt_divisor"] = config.dt_divisor;
    m["weighting"] = std::string(to_string(config.weighting));
    m["checkpoints"] = sc.checkpoints;
    m["scenario"] = ordered_json::parse(to_json(sc.config, -1));
    return m;
}

std::string csv_preamble(const ordered_json& meta)
{
    std::ostringstream out;
    std::istringstream lines(meta.dump(2));
    for (std::string line; std::getline(lines, line);) {
        out << "# " << line << '\n';
    }
    return out.str();
}

std::string quoted(const std::string& s)
{
    return '"' + s + '"';
}

std::string fmt(double v)
{
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

StepPolicy policy_of(const RunConfig& config)
{
    StepPolicy p;
    p.dt_divisor = config.dt_divisor;
    return p;
}

const char* column_names[4] = {"ok_ok", "ok_fail", "fail_ok", "fail_fail"};

std::string segment_name(const Scenario& sc, std::uint32_t segment)
{
    const auto& s = sc.schedule.segments()[segment];
    return s.agent.empty() ? "segment " + std::to_string(segment) : s.agent;
}

ordered_json report_json(const fr::ImplicationReport& r)
{
    ordered_json j;
    j["n_runs"] = r.n_runs;
    j["r1_tail"] = r.r1_tail;
    j["r1_head"] = r.r1_head;
    j["w4_ok"] = r.w4_ok;
    j["r1_tail_and_w4_ok"] = r.r1_tail_w4_ok;
    j["r1_head_and_z2_plus"] = r.r1_head_z2_plus;
    j["z2_minus_and_x3_ok"] = r.z2_minus_x3_ok;
    j["x3_ok_and_w4_ok"] = r.x3_ok_w4_ok;
    j["r4_tail_x4_ok_w4_ok"] = r.r4_tail_x4_ok_w4_ok;
    j["phi_chain"] = r.phi_chain;
    j["phi_chain_z_minus"] = r.phi_chain_z_minus;
    j["r_flips_during_A"] = r.r_flips_during_A;
    j["z_flips_during_W"] = r.z_flips_during_W;
    j["r_changed_1_to_4"] = r.r_changed_1_to_4;
    j["head_tail_jumps_during_F2"] = r.head_tail_jumps_during_F2;
    j["jumps_after_final_measurement"] = r.jumps_after_final_measurement;
    j["multi_jump_segments"] = r.multi_jump_segments;
    j["reverse_jumps"] = r.reverse_jumps;
    j["starvation_events"] = r.starvation_events;
    j["eq2_refuted"] = r.eq2_refuted();
    j["eq6_witnessed"] = r.eq6_witnessed();
    return j;
}

bool is_fr(const Scenario& sc)
{
    return sc.config.name == "fr";
}

} // namespace

void validate(const RunConfig& c)
{
    if (c.n_runs < 1) {
        throw Error("--n must be at least 1");
    }
    if (c.tau && !(*c.tau > 0.0 && *c.tau < 1.0)) {
        throw Error("--tau must lie in (0, 1)");
    }
    if (!(c.dt_divisor >= 100.0)) {
        throw Error("--dt-divisor must be at least 100");
    }
    if (c.format != "json" && c.format != "csv") {
        throw Error("--format must be json or csv");
    }
}

Scenario load_scenario(const RunConfig& c)
{
    validate(c);
    ScenarioConfig config;
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        if (!in) {
            throw Error("cannot read config '" + c.config_path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = parse_scenario_config(buffer.str());
    } else {
        config = builtin_config(c.scenario);
    }
    if (c.tau) {
        config = with_tau(std::move(config), *c.tau);
    }
    if (!c.checkpoints.empty()) {
        config.checkpoints = c.checkpoints;
    }
    return build_scenario(config);
}

int cmd_table(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto sc = load_scenario(config);
    const auto table = full_table(sc, config.weighting);

    int code = ok;
    ordered_json verification;
    if (config.verify) {
        if (!is_fr(sc)) {
            err << "table --verify needs the fr scenario\n";
            return usage;
        }
        double worst = 0.0;
        for (const auto& expected : fr::expected_table) {
            const auto& row = table.row(expected.agent);
            for (std::size_t i = 0; i < 4; ++i) {
                const double d = std::abs(row[i] - expected.p[i]);
                worst = std::max(worst, d);
                if (d > table_tolerance) {
                    err << "table mismatch: " << expected.agent << ' ' << column_names[i] << " = " << fmt(row[i])
                        << ", expected " << fmt(expected.p[i]) << '\n';
                    code = verification_failed;
                }
            }
        }
        verification = {{"tolerance", table_tolerance}, {"max_deviation", worst}, {"passed", code == ok}};
    }

    auto meta = metadata("table", config, sc);
    meta.erase("seed");
    meta.erase("n_runs");
    meta.erase("dt_divisor");
    meta.erase("checkpoints");
    std::string text;
    if (config.format == "csv") {
        text = csv_preamble(meta);
        text += "agent,ok_ok,ok_fail,fail_ok,fail_fail\n";
        for (const auto& [agent, row] : table.rows) {
            text += agent;
            for (const double p : row) {
                text += ',' + fmt(p);
            }
            text += '\n';
        }
    } else {
        ordered_json j = meta;
        j["rows"] = ordered_json::array();
        for (const auto& [agent, row] : table.rows) {
            ordered_json r{{"agent", agent}};
            for (std::size_t i = 0; i < 4; ++i) {
                r[column_names[i]] = row[i];
            }
            j["rows"].push_back(r);
        }
        if (config.verify) {
            j["verification"] = verification;
        }
        text = j.dump(2) + '\n';
    }
    emit(config, text, out);
    return code;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto sc = load_scenario(config);
    const PilotTimeline timeline(sc.schedule, sc.initial_state, sc.spec, policy_of(config));
    const auto stats = run_ensemble(config.n_runs, timeline, config.seed, sc.checkpoints, config.threads);

    std::optional<fr::ImplicationReport> report;
    if (is_fr(sc)) {
        report = fr::check_claims(stats, sc);
    }

    int code = ok;
    ordered_json verification = ordered_json::object();
    if (config.verify) {
        // Every checkpoint frequency against the master equation, 4 sigma plus one count.
        const auto me = integrate_master_equation(timeline, timeline.initial_weights());
        const double n = static_cast<double>(stats.n_runs);
        std::size_t failures = 0;
        double worst_z = 0.0;
        for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
            const auto& p = me.probabilities[me.index_at(stats.checkpoints[c])];
            for (SectorId s = 0; s < stats.sector_count; ++s) {
                const double f = stats.frequency(c, s);
                const double sigma = std::sqrt(p[s] * (1.0 - p[s]) / n);
                const double tol = 4.0 * sigma + 1.0 / n;
                if (sigma > 0.0) {
                    worst_z = std::max(worst_z, std::abs(f - p[s]) / sigma);
                }
                if (std::abs(f - p[s]) > tol) {
                    ++failures;
                    err << "frequency mismatch at t = " << stats.checkpoints[c] << " sector "
                        << sc.spec.to_string(s) << ": " << fmt(f) << " vs " << fmt(p[s]) << '\n';
                }
            }
        }
        verification["frequency_failures"] = failures;
        verification["max_z_score"] = worst_z;
        bool passed = failures == 0;
        if (report) {
            const bool structure = report->head_tail_jumps_during_F2 == 0 && report->jumps_after_final_measurement == 0;
            if (!report->eq2_refuted() || !report->eq6_witnessed() || !structure) {
                err << "implication checks failed\n";
                passed = false;
            }
        }
        verification["passed"] = passed;
        code = passed ? ok : verification_failed;
    }

    const bool starved = stats.starvation_events > config.max_starvation;
    if (starved) {
        err << "starvation rule fired " << stats.starvation_events << " times in " << stats.starved_runs
            << " runs (threshold " << config.max_starvation << "); stranded steps: " << stats.stranded_events << '\n';
        code = starvation;
    }

    auto meta = metadata("simulate", config, sc);
    ordered_json diagnostics{{"starvation_events", stats.starvation_events},
                             {"starved_runs", stats.starved_runs},
                             {"stranded_events", stats.stranded_events},
                             {"multi_jump_segments", stats.multi_jump_segments},
                             {"reverse_jumps", stats.reverse_jumps},
                             {"timeline_steps", timeline.steps().size()}};

    std::string text;
    if (config.format == "csv") {
        meta["diagnostics"] = diagnostics;
        if (report) {
            meta["report"] = report_json(*report);
        }
        if (config.verify) {
            meta["verification"] = verification;
        }
        text = csv_preamble(meta);
        text += "checkpoint,sector,frequency\n";
        for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
            for (SectorId s = 0; s < stats.sector_count; ++s) {
                if (stats.counts[c][s] > 0) {
                    text += fmt(stats.checkpoints[c]) + ',' + quoted(sc.spec.to_string(s)) + ',' +
                            fmt(stats.frequency(c, s)) + '\n';
                }
            }
        }
    } else {
        ordered_json j = meta;
        j["frequencies"] = ordered_json::array();
        for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
            ordered_json f = ordered_json::object();
            for (SectorId s = 0; s < stats.sector_count; ++s) {
                if (stats.counts[c][s] > 0) {
                    f[sc.spec.to_string(s)] = stats.frequency(c, s);
                }
            }
            j["frequencies"].push_back({{"checkpoint", stats.checkpoints[c]}, {"sectors", f}});
        }
        j["transitions"] = ordered_json::array();
        for (const auto& [key, count] : stats.transitions) {
            j["transitions"].push_back({{"segment", segment_name(sc, key.segment)},
                                        {"from", sc.spec.to_string(key.from)},
                                        {"to", sc.spec.to_string(key.to)},
                                        {"count", count}});
        }
        j["diagnostics"] = diagnostics;
        if (report) {
            j["report"] = report_json(*report);
        }
        if (config.verify) {
            j["verification"] = verification;
        }
        text = j.dump(2) + '\n';
    }
    emit(config, text, out);
    return code;
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto sc = load_scenario(config);
    const PilotTimeline timeline(sc.schedule, sc.initial_state, sc.spec, policy_of(config));
    const auto me = integrate_master_equation(timeline, timeline.initial_weights());

    double worst = 0.0;
    double worst_t = sc.checkpoints.empty() ? 0.0 : sc.checkpoints.front();
    SectorId worst_s = 0;
    for (const double t : sc.checkpoints) {
        const auto k = me.index_at(t);
        for (SectorId s = 0; s < sc.spec.sector_count(); ++s) {
            const double d = std::abs(me.probabilities[k][s] - me.born[k][s]);
            if (d > worst) {
                worst = d;
                worst_t = t;
                worst_s = s;
            }
        }
    }
    const bool passed = worst <= oracle_tolerance;
    if (!passed) {
        err << "master equation departs from the Born weights by " << fmt(worst) << " at t = " << worst_t
            << " in sector " << sc.spec.to_string(worst_s) << '\n';
    }

    auto meta = metadata("oracle", config, sc);
    meta.erase("seed");
    meta.erase("n_runs");
    ordered_json summary{{"max_deviation_at_checkpoints", worst},
                         {"max_deviation_on_grid", me.max_deviation()},
                         {"tolerance", oracle_tolerance},
                         {"grid_points", me.times.size()},
                         {"passed", passed}};
    std::string text;
    if (config.format == "csv") {
        meta["summary"] = summary;
        text = csv_preamble(meta) + "checkpoint,sector,probability,born\n";
        for (const double t : sc.checkpoints) {
            const auto k = me.index_at(t);
            for (SectorId s = 0; s < sc.spec.sector_count(); ++s) {
                if (me.probabilities[k][s] > 0.0 || me.born[k][s] > 0.0) {
                    text += fmt(t) + ',' + quoted(sc.spec.to_string(s)) + ',' + fmt(me.probabilities[k][s]) + ',' +
                            fmt(me.born[k][s]) + '\n';
                }
            }
        }
    } else {
        ordered_json j = meta;
        j["summary"] = summary;
        j["checkpoints_detail"] = ordered_json::array();
        for (const double t : sc.checkpoints) {
            const auto k = me.index_at(t);
            ordered_json rows = ordered_json::object();
            for (SectorId s = 0; s < sc.spec.sector_count(); ++s) {
                if (me.probabilities[k][s] > 0.0 || me.born[k][s] > 0.0) {
                    rows[sc.spec.to_string(s)] = {{"probability", me.probabilities[k][s]}, {"born", me.born[k][s]}};
                }
            }
            j["checkpoints_detail"].push_back({{"checkpoint", t}, {"sectors", rows}});
        }
        text = j.dump(2) + '\n';
    }
    emit(config, text, out);
    return passed ? ok : verification_failed;
}

int cmd_verify_states(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto sc = load_scenario(config);
    if (!is_fr(sc)) {
        err << "verify-states needs the fr scenario\n";
        return usage;
    }
    bool passed = true;
    ordered_json pilots = ordered_json::array();
    for (int k = 0; k <= 4; ++k) {
        const auto evolved = sc.schedule.evolve(sc.initial_state, sc.schedule.t_start(), static_cast<double>(k));
        const double d = distance_up_to_phase(evolved, fr::reference_pilot(sc, k));
        const bool ok_k = d <= state_tolerance;
        passed = passed && ok_k;
        if (!ok_k) {
            err << "pilot at t = " << k << " departs from the reference by " << fmt(d) << '\n';
        }
        const auto real = fr::reference_real(sc, k);
        pilots.push_back({{"stage", k},
                          {"distance_up_to_phase", d},
                          {"passed", ok_k},
                          {"viable_components", decompose(evolved, sc.spec).size()},
                          {"tracked_sector", sc.spec.to_string(real.sector)},
                          {"tracked_weight", real.weight}});
    }

    const auto expansion = fr::final_expansion(sc);
    const auto& spec = sc.spec;
    ordered_json components = ordered_json::array();
    double ok_ok_total = 0.0;
    bool ok_ok_each = true;
    for (const auto& c : expansion) {
        const bool both_ok = spec.label(c.sector, "A") == "ok" && spec.label(c.sector, "W") == "ok";
        if (both_ok) {
            ok_ok_total += c.weight;
            ok_ok_each = ok_ok_each && std::abs(c.weight - 1.0 / 48.0) <= state_tolerance;
        }
        components.push_back({{"sector", spec.to_string(c.sector)}, {"weight", c.weight}});
    }
    const bool count_ok = expansion.size() == 16;
    const bool total_ok = std::abs(ok_ok_total - 1.0 / 12.0) <= state_tolerance;
    passed = passed && count_ok && ok_ok_each && total_ok;
    if (!count_ok || !ok_ok_each || !total_ok) {
        err << "final expansion check failed\n";
    }

    // Amplitude of the tracked final component, phase fixed by the largest entry.
    const auto real4 = fr::reference_real(sc, 4);
    Complex amp{};
    for (Eigen::Index i = 0; i < real4.component.amplitudes().size(); ++i) {
        if (std::abs(real4.component.amplitudes()[i]) > std::abs(amp)) {
            amp = real4.component.amplitudes()[i];
        }
    }
    ordered_json phi4{{"sector", spec.to_string(real4.sector)},
                      {"expanded_amplitude", amp.real()},
                      {"expanded_weight", real4.weight},
                      {"stated_amplitude", fr::stated_phi4_amplitude},
                      {"stated_weight", fr::stated_phi4_amplitude * fr::stated_phi4_amplitude},
                      {"deviation", std::abs(std::abs(amp) - std::abs(fr::stated_phi4_amplitude))},
                      {"resolution", "expansion of the evolved pilot; the stated value is not used"}};

    auto meta = metadata("verify-states", config, sc);
    meta.erase("seed");
    meta.erase("n_runs");
    meta.erase("dt_divisor");
    meta.erase("weighting");
    std::string text;
    if (config.format == "csv") {
        meta["final_component"] = phi4;
        meta["passed"] = passed;
        text = csv_preamble(meta) + "stage,distance_up_to_phase,viable_components,tracked_sector,tracked_weight\n";
        for (const auto& p : pilots) {
            text += std::to_string(p["stage"].get<int>()) + ',' + fmt(p["distance_up_to_phase"].get<double>()) + ',' +
                    std::to_string(p["viable_components"].get<std::size_t>()) + ',' +
                    quoted(p["tracked_sector"].get<std::string>()) + ',' + fmt(p["tracked_weight"].get<double>()) +
                    '\n';
        }
    } else {
        ordered_json j = meta;
        j["pilots"] = pilots;
        j["final_expansion"] = {{"components", components},
                                {"count", expansion.size()},
                                {"ok_ok_total_weight", ok_ok_total},
                                {"ok_ok_each_one_48th", ok_ok_each}};
        j["final_component"] = phi4;
        j["passed"] = passed;
        text = j.dump(2) + '\n';
    }
    emit(config, text, out);
    return passed ? ok : verification_failed;
}

} // namespace bellsim::cli
