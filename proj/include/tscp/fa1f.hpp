#pragma once

#include "tscp/lattice.hpp"
#include "tscp/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace tscp {

// Binary constrained Glauber dynamics: a site with at least one empty (0)
// neighbor resamples to 0 with probability q, to 1 otherwise; a site with no
// empty neighbor is frozen. On infection-free configurations this is exactly
// the three-state rule, which the tests exploit.
struct FA1fConfig {
    int left = 0;
    int right = 0;
    std::uint8_t boundary_left = 1;   // frozen virtual bits just outside
    std::uint8_t boundary_right = 1;
    std::vector<std::uint8_t> bits;

    FA1fConfig() = default;
    FA1fConfig(int l, int r, std::uint8_t fill, std::uint8_t bl, std::uint8_t br);

    std::uint8_t at(int x) const noexcept {
        if (x < left) return boundary_left;
        if (x > right) return boundary_right;
        return bits[static_cast<std::size_t>(x - left)];
    }
    void set(int x, std::uint8_t v) { bits.at(static_cast<std::size_t>(x - left)) = v; }
    int size() const noexcept { return right - left + 1; }
    bool operator==(const FA1fConfig&) const = default;
};

// Threshold layout identical to the three-state rule so shared draws couple
// the two dynamics site for site.
inline std::uint8_t fa1f_next(std::uint8_t current, std::uint8_t left_neighbor,
                              std::uint8_t right_neighbor, double u, double q) noexcept {
    if (left_neighbor == 0 || right_neighbor == 0) return u < q ? 0 : 1;
    return current;
}

FA1fConfig fa1f_step(const FA1fConfig& config, int x, double u, double q);

FA1fConfig sample_product_measure(int left, int right, double zero_density, std::uint64_t seed,
                                  std::uint8_t boundary_left = 1, std::uint8_t boundary_right = 1);

// Pair state per site: 0 and 1 mean the copies agree, the two discrepancy
// states record which copy carries the 1.
enum class FourState : std::uint8_t { Zero = 0, One = 1, DiscDown = 2, DiscUp = 3 };
constexpr FourState encode_pair(std::uint8_t a, std::uint8_t b) {
    if (a == b) return a ? FourState::One : FourState::Zero;
    return a == 0 ? FourState::DiscDown : FourState::DiscUp;
}
constexpr std::array<std::uint8_t, 2> decode_pair(FourState s) {
    switch (s) {
        case FourState::Zero: return {0, 0};
        case FourState::One: return {1, 1};
        case FourState::DiscDown: return {0, 1};
        case FourState::DiscUp: return {1, 0};
    }
    return {0, 0};
}

// Two copies under shared clocks and draws, reported through the pair
// process. Discrepancy counts are sampled at the requested times plus the
// horizon; absorption (an empty discrepancy set never refills) is monitored
// at every event.
struct FourStateRun {
    std::vector<double> sample_times;
    std::vector<long> discrepancy_counts;
    std::vector<FourState> final_config;
    long final_discrepancies = 0;
    bool absorption_violated = false;
    long events = 0;
};
FourStateRun couple_two_copies(const FA1fConfig& eta0, const FA1fConfig& tilde0, double q,
                               double horizon, std::uint64_t seed,
                               const std::vector<double>& sample_times = {});

// Joint run of the two binary copies and a three-state copy whose initial
// infected set is the initial discrepancy set (agreeing sites copied as-is).
// Checks, at every event, that every discrepancy is infected and that on
// non-infected sites all three processes agree.
struct DominationRun {
    long events = 0;
    long violations = 0;
    std::optional<double> first_violation_time;
};
DominationRun check_three_state_domination(const FA1fConfig& eta0, const FA1fConfig& tilde0,
                                           double q, double horizon, std::uint64_t seed);

// Mean distance from the tracked site to the nearest empty site, sampled at
// the requested times, with the analytic comparison line
// max{1, kappa + t(1-2q)} attached when q > 1/2.
struct XiCurve {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> se;
    std::vector<double> bound;
    bool bound_applies = false;
    long replicas = 0;
};
// Initial state: all passive except one healthy site at +kappa from the
// tracked site, frozen passive boundary; the replica count controls the
// Monte Carlo resolution.
XiCurve xi_drift_experiment(int kappa, double q, const std::vector<double>& times, long replicas,
                            std::uint64_t seed, int window_left = -40, int window_right = 60);

// Simplified front walk: two unit-rate clocks (the nearest empty site and
// the site just inside it). An inner ring with u < q moves the distance down
// one, an outer ring with u >= q moves it up one; other rings change
// nothing. Position changes therefore arrive at rate one with step law
// (-1 w.p. q, +1 w.p. 1-q). The walk stops if it reaches zero.
struct XiProcess {
    double xi0 = 0;
    struct Move {
        double time;
        int step;        // +1 or -1
        bool inner_ring; // cause: inner site ring (true) or outer (false)
    };
    std::vector<Move> moves;
    double final_xi = 0;
    long position_changes = 0;
    long rings = 0;
    bool absorbed = false;  // reached zero before the horizon
    double absorbed_time = 0;
};
XiProcess simplified_boundary_process(double xi0, double q, double horizon, std::uint64_t seed);

// Shared-ring comparison of the simplified walk against the true nearest
// empty-site distance of the full dynamics, from the same initial state as
// xi_drift_experiment. Runs until the walk first reaches one, the idealized
// regime's edge; counts any time the walk dips below the true distance.
struct XiDominationRun {
    long checks = 0;
    long violations = 0;
    double stopped_at = 0;
};
XiDominationRun check_xi_domination(int kappa, double q, double horizon, std::uint64_t seed,
                                    int window_left = -40, int window_right = 60);

}  // namespace tscp
