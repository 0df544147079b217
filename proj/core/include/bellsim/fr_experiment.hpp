#pragma once

#include <array>
#include <string>
#include <vector>

#include "bellsim/ensemble.hpp"
#include "bellsim/scenario.hpp"

namespace bellsim::fr {

inline constexpr double default_tau = 0.5;

/// The built-in extended Wigner's friend scenario with measurement duration tau in (0, 1).
Scenario build_scenario(double tau = default_tau);

/// Hand-built pilot after stage k = 0..4 (t = 0, 1, 2, 3, 4), independent of the simulator.
StateVector reference_pilot(const Scenario& scenario, int k);

/// Sector of the tracked real state at stage k: tail, then z = +, then x = ok, then w = ok with z = -.
SectorId chain_sector(const Scenario& scenario, int k);

/// Projection of reference_pilot(k) onto chain_sector(k).
ViableComponent reference_real(const Scenario& scenario, int k);

/// Viable components of reference_pilot(4); sixteen of them.
std::vector<ViableComponent> final_expansion(const Scenario& scenario);

/// The (tail, -, ok, ok) amplitude as usually stated. The expansion gives -sqrt(1/48).
inline const double stated_phi4_amplitude = -0.20412414523193148; // -sqrt(1/24)

/// Expected (x, w) table, columns (ok,ok), (ok,fail), (fail,ok), (fail,fail).
struct ExpectedRow {
    const char* agent;
    std::array<double, 4> p;
};
inline constexpr std::array<ExpectedRow, 4> expected_table{{
    {"F1", {1.0 / 12, 5.0 / 12, 1.0 / 12, 5.0 / 12}},
    {"F2", {1.0 / 12, 1.0 / 12, 5.0 / 12, 5.0 / 12}},
    {"A", {1.0 / 4, 1.0 / 4, 1.0 / 20, 9.0 / 20}},
    {"W", {1.0 / 12, 1.0 / 12, 1.0 / 12, 3.0 / 4}},
}};

/// Ensemble counts for the implication chain. r, z, x, w are the F1, F2, A, W records.
struct ImplicationReport {
    std::uint64_t n_runs = 0;
    std::uint64_t r1_tail = 0;
    std::uint64_t r1_head = 0;
    std::uint64_t w4_ok = 0;
    std::uint64_t r1_tail_w4_ok = 0;
    std::uint64_t r1_head_z2_plus = 0;
    std::uint64_t z2_minus_x3_ok = 0;
    std::uint64_t x3_ok_w4_ok = 0;
    /// r(4) = tail, x(4) = ok, w(4) = ok.
    std::uint64_t r4_tail_x4_ok_w4_ok = 0;
    /// Tracked chain through stages 1..3 ending in (tail, any z, ok, ok).
    std::uint64_t phi_chain = 0;
    /// Same, ending exactly in (tail, -, ok, ok).
    std::uint64_t phi_chain_z_minus = 0;
    std::uint64_t r_flips_during_A = 0;
    std::uint64_t z_flips_during_W = 0;
    std::uint64_t r_changed_1_to_4 = 0;
    std::uint64_t head_tail_jumps_during_F2 = 0;
    std::uint64_t jumps_after_final_measurement = 0;
    std::uint64_t multi_jump_segments = 0;
    std::uint64_t reverse_jumps = 0;
    std::uint64_t starvation_events = 0;

    /// "r(1) = tail implies w(4) = fail" is refuted by a counterexample.
    bool eq2_refuted() const noexcept { return r1_tail_w4_ok > 0; }
    /// "x(3) = w(4) = ok is possible" is witnessed.
    bool eq6_witnessed() const noexcept { return x3_ok_w4_ok > 0; }
};

/// Needs checkpoints at t = 1, 2, 3, 4; throws Error otherwise.
ImplicationReport check_claims(const EnsembleStats& stats, const Scenario& scenario);

} // namespace bellsim::fr
