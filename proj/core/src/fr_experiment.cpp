#include "bellsim/fr_experiment.hpp"

#include <cmath>

namespace bellsim::fr {

namespace {

using Part = PartialState;

const double r2 = 1.0 / std::sqrt(2.0);

Part ket(std::initializer_list<std::pair<const std::string, std::string>> labels, Complex amp = 1.0)
{
    return Part{PartialKet{amp, LabelAssignment(labels)}};
}

Part join(Part a, const Part& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Two-factor basis vectors.
Part f1c(const std::string& which)
{
    if (which == "head" || which == "tail") {
        return ket({{"F1", which}, {"C", which}});
    }
    const double sign = which == "ok" ? -1.0 : 1.0;
    return join(ket({{"F1", "head"}, {"C", "head"}}, r2), ket({{"F1", "tail"}, {"C", "tail"}}, sign * r2));
}

Part f2s(const std::string& which)
{
    if (which == "+") {
        return ket({{"F2", "+"}, {"S", "up"}});
    }
    if (which == "-") {
        return ket({{"F2", "-"}, {"S", "down"}});
    }
    const double sign = which == "ok" ? -1.0 : 1.0;
    return join(ket({{"F2", "-"}, {"S", "down"}}, r2), ket({{"F2", "+"}, {"S", "up"}}, sign * r2));
}

Part single(const char* factor, const char* label)
{
    return ket({{factor, label}});
}

StateVector term(const Scenario& sc, double c, std::initializer_list<Part> parts)
{
    return product_state(sc.space, parts) * Complex{c};
}

} // namespace

Scenario build_scenario(double tau)
{
    if (!(tau > 0.0 && tau < 1.0)) {
        throw Error("tau must lie in (0, 1)");
    }
    return bellsim::build_scenario(with_tau(builtin_config("fr"), tau));
}

StateVector reference_pilot(const Scenario& sc, int k)
{
    const double s13 = std::sqrt(1.0 / 3.0);
    const double s23 = std::sqrt(2.0 / 3.0);
    const double s16 = std::sqrt(1.0 / 6.0);
    const double s112 = std::sqrt(1.0 / 12.0);
    const auto a0 = single("A", "0");
    const auto w0 = single("W", "0");
    switch (k) {
    case 0:
        return term(sc, s13, {f1c("head"), single("F2", "0"), single("S", "up"), a0, w0}) +
               term(sc, s23, {f1c("tail"), single("F2", "0"), single("S", "up"), a0, w0});
    case 1: {
        const auto right = join(ket({{"S", "up"}}, r2), ket({{"S", "down"}}, r2));
        return term(sc, s13, {f1c("head"), single("S", "down"), single("F2", "0"), a0, w0}) +
               term(sc, s23, {f1c("tail"), right, single("F2", "0"), a0, w0});
    }
    case 2:
        return term(sc, s13, {f1c("head"), f2s("-"), a0, w0}) + term(sc, s13, {f1c("tail"), f2s("+"), a0, w0}) +
               term(sc, s13, {f1c("tail"), f2s("-"), a0, w0});
    case 3:
        return term(sc, -s16, {f1c("ok"), single("A", "ok"), f2s("+"), w0}) +
               term(sc, s16, {f1c("fail"), single("A", "fail"), f2s("+"), w0}) +
               term(sc, s23, {f1c("fail"), single("A", "fail"), f2s("-"), w0});
    case 4:
        return term(sc, s112, {f1c("ok"), single("A", "ok"), f2s("ok"), single("W", "ok")}) +
               term(sc, s112, {f1c("fail"), single("A", "fail"), f2s("ok"), single("W", "ok")}) +
               term(sc, -s112, {f1c("ok"), single("A", "ok"), f2s("fail"), single("W", "fail")}) +
               term(sc, 3.0 * s112, {f1c("fail"), single("A", "fail"), f2s("fail"), single("W", "fail")});
    default:
        throw Error("reference stage must be 0..4");
    }
}

SectorId chain_sector(const Scenario& sc, int k)
{
    static constexpr const char* chain[] = {"tail,0,0,0", "tail,0,0,0", "tail,+,0,0", "tail,+,ok,0", "tail,-,ok,ok"};
    if (k < 0 || k > 4) {
        throw Error("reference stage must be 0..4");
    }
    return sc.spec.parse(chain[k]);
}

ViableComponent reference_real(const Scenario& sc, int k)
{
    const auto target = chain_sector(sc, k);
    for (auto& c : decompose(reference_pilot(sc, k), sc.spec)) {
        if (c.sector == target) {
            return c;
        }
    }
    throw Error("chain sector is empty in the reference pilot");
}

std::vector<ViableComponent> final_expansion(const Scenario& sc)
{
    return decompose(reference_pilot(sc, 4), sc.spec);
}

ImplicationReport check_claims(const EnsembleStats& stats, const Scenario& sc)
{
    std::array<std::size_t, 5> c{};
    for (int k = 1; k <= 4; ++k) {
        try {
            c[k] = stats.checkpoint_index(k);
        } catch (const Error&) {
            throw Error("check_claims: ensemble lacks a checkpoint at t = " + std::to_string(k));
        }
    }
    const auto& spec = sc.spec;
    if (stats.sector_count != spec.sector_count()) {
        throw Error("check_claims: ensemble does not match the scenario");
    }
    const auto r = spec.position_of("F1");
    const auto z = spec.position_of("F2");
    const auto x = spec.position_of("A");
    const auto w = spec.position_of("W");
    auto lbl = [&](SectorId s, std::size_t pos) -> const std::string& {
        return sc.space->factor(spec.beable_factors()[pos]).labels[spec.value(s, pos)];
    };

    ImplicationReport rep;
    rep.n_runs = stats.n_runs;
    const auto chain1 = chain_sector(sc, 1);
    const auto chain2 = chain_sector(sc, 2);
    const auto chain3 = chain_sector(sc, 3);
    const auto chain4 = chain_sector(sc, 4);
    for (const auto& [path, n] : stats.paths) {
        const auto s1 = path[c[1]];
        const auto s2 = path[c[2]];
        const auto s3 = path[c[3]];
        const auto s4 = path[c[4]];
        const bool r1_tail = lbl(s1, r) == "tail";
        const bool w4_ok = lbl(s4, w) == "ok";
        rep.r1_tail += r1_tail ? n : 0;
        rep.r1_head += lbl(s1, r) == "head" ? n : 0;
        rep.w4_ok += w4_ok ? n : 0;
        rep.r1_tail_w4_ok += r1_tail && w4_ok ? n : 0;
        rep.r1_head_z2_plus += lbl(s1, r) == "head" && lbl(s2, z) == "+" ? n : 0;
        rep.z2_minus_x3_ok += lbl(s2, z) == "-" && lbl(s3, x) == "ok" ? n : 0;
        rep.x3_ok_w4_ok += lbl(s3, x) == "ok" && w4_ok ? n : 0;
        rep.r4_tail_x4_ok_w4_ok += lbl(s4, r) == "tail" && lbl(s4, x) == "ok" && w4_ok ? n : 0;
        const bool chain = s1 == chain1 && s2 == chain2 && s3 == chain3;
        rep.phi_chain += chain && lbl(s4, r) == "tail" && lbl(s4, x) == "ok" && w4_ok ? n : 0;
        rep.phi_chain_z_minus += chain && s4 == chain4 ? n : 0;
        rep.r_flips_during_A += spec.value(s2, r) != spec.value(s3, r) ? n : 0;
        rep.z_flips_during_W += spec.value(s3, z) != spec.value(s4, z) ? n : 0;
        rep.r_changed_1_to_4 += spec.value(s1, r) != spec.value(s4, r) ? n : 0;
    }

    if (const auto f2 = sc.schedule.find_agent("F2")) {
        for (const auto& [key, n] : stats.transitions) {
            if (key.segment != *f2) {
                continue;
            }
            const auto& a = lbl(key.from, r);
            const auto& b = lbl(key.to, r);
            if ((a == "head" && b == "tail") || (a == "tail" && b == "head")) {
                rep.head_tail_jumps_during_F2 += n;
            }
        }
    }
    const auto w_seg = sc.schedule.find_agent("W");
    if (!w_seg) {
        throw Error("check_claims: scenario has no W measurement");
    }
    const double w_end = sc.schedule.segments()[*w_seg].t_end;
    rep.jumps_after_final_measurement = stats.jumps_after[stats.checkpoint_index(w_end)];
    rep.multi_jump_segments = stats.multi_jump_segments;
    rep.reverse_jumps = stats.reverse_jumps;
    rep.starvation_events = stats.starvation_events;
    return rep;
}

} // namespace bellsim::fr
