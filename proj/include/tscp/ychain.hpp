#pragma once

#include "tscp/lattice.hpp"
#include "tscp/rational.hpp"
#include "tscp/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tscp {

// Right-neighborhood chain of the rightmost infected site: a level (the
// site's position) plus the three binary states just right of it. Patterns
// are encoded w2*4 + w3*2 + w4.
struct YState {
    long level = 0;
    std::uint8_t pattern = 0;
    bool operator==(const YState&) const = default;
};

constexpr std::uint8_t y_pattern(int w2, int w3, int w4) {
    return static_cast<std::uint8_t>(w2 * 4 + w3 * 2 + w4);
}
constexpr std::array<int, 3> y_bits(std::uint8_t pattern) {
    return {(pattern >> 2) & 1, (pattern >> 1) & 1, pattern & 1};
}

// Virtual state at offset +4 from the level site, the one piece of the chain
// the closed forms have to pin down. Passive is the canonical choice: it is
// the unique one satisfying every printed identity (see validation).
enum class YVirtualBoundary : std::uint8_t { Passive, Healthy };

struct YEdge {
    int level_shift;        // -1, 0, +1
    std::uint8_t target;    // pattern after the move
    Rational prob;          // exact transition probability
    double prob_d;          // cached double for sampling
};

struct YKernel {
    Rational q;
    YVirtualBoundary boundary = YVirtualBoundary::Passive;
    std::array<std::vector<YEdge>, 8> table;
    // Raw (pre-canonicalization) landing pattern of each progress edge, kept
    // for the report on residual reconstruction freedom. Progress edges are
    // canonicalized to land on pattern (1,0,1): immediately after the level
    // site advances, its new right neighborhood is passive-healthy-passive.
    std::array<std::optional<std::uint8_t>, 8> raw_up_landing{};
};

Rational cycle_weight_a(const Rational& q);  // (1-q) / (2(3-q))
Rational cycle_weight_b(const Rational& q);  // (1-q) / (2(2-q))

// Probability of the embedded-chain edge from `source` with the given level
// shift and target, 0 if absent.
Rational edge_probability(const YKernel& kernel, std::uint8_t source, int level_shift,
                          std::uint8_t target);

// Reconstructs the chain as the self-loop-free embedded chain of the lattice
// update law on the four ringing sites (the level site plus its three right
// neighbors), with an infected virtual site on the left and the chosen
// virtual boundary at offset +4. With validate=true (the default) the
// construction-level identities (row stochasticity, level-shift support, the
// two 2-cycle weights) are checked and a violation throws std::logic_error
// naming the failed identity. Both boundary choices pass these; the
// first-passage identities below separate them.
YKernel build_y_kernel(const Rational& q,
                       YVirtualBoundary boundary = YVirtualBoundary::Passive,
                       bool validate = true);

YState y_step(const YState& state, const YKernel& kernel, SplitMix64& rng);

// Absorption analysis with the two adjacent levels absorbing: exit_up[p] is
// the probability of finishing one level higher when started from pattern p,
// mean_steps[p] the expected number of embedded steps, and
// down_landing[p][t] the probability of finishing one level lower with
// landing pattern t. Exact linear solve; throws std::domain_error only if
// the system is singular (impossible for 0 < q < 1).
struct FirstPassageResult {
    std::array<Rational, 8> exit_up;
    std::array<Rational, 8> mean_steps;
    std::array<std::array<Rational, 8>, 8> down_landing;

    // The three tracked starts.
    const Rational& theta1() const { return exit_up[y_pattern(1, 1, 0)]; }
    const Rational& theta2() const { return exit_up[y_pattern(1, 0, 0)]; }
    const Rational& theta3() const { return exit_up[y_pattern(1, 0, 1)]; }
};
FirstPassageResult first_passage_exact(const YKernel& kernel);

// Probability, from pattern (1,0,1), of exiting downward through the
// specific edge whose pre-exit pattern is (0,0,1) and whose landing is the
// good pattern (1,0,0).
Rational kappa_exact(const YKernel& kernel);

// Good states: the two patterns reachable right after a downward level
// change that keep the chain's drift analysis alive.
constexpr std::uint8_t kGood101 = 0b101;
constexpr std::uint8_t kGood100 = 0b100;

struct TwoLevelExact {
    Rational p_plus2;
    Rational p_zero;
    Rational p_minus2;
    Rational drift;  // 2 (p_plus2 - p_minus2)
};
TwoLevelExact two_level_exact(const YKernel& kernel, std::uint8_t start_pattern);

struct TwoLevelMonteCarlo {
    double p_plus2 = 0;
    double p_zero = 0;
    double p_minus2 = 0;
    double drift = 0;
    double drift_se = 0;
    long episodes = 0;
    long censored = 0;  // episodes that hit the step cap before two level changes
};
// Per-episode step cap: 1e6 embedded steps, after which the episode is
// counted as censored instead of blocking forever.
TwoLevelMonteCarlo two_level_monte_carlo(const YKernel& kernel, std::uint8_t start_pattern,
                                         long episodes, std::uint64_t seed);

// Full identity report for one kernel: construction identities plus the
// first-passage system and every printed bound. Used by the report CSV and
// the verification suite.
struct YIdentityCheck {
    std::string name;
    bool pass;
};
std::vector<YIdentityCheck> y_identity_report(const YKernel& kernel);

// Closed forms the report checks against.
Rational theta1_lower_bound(const Rational& q);           // (15-9q+3q^2-q^3)/(18-2q^2)
Rational theta2_lower_bound(const Rational& q);           // (6-9q+4q^2-q^3)/(9-q^2)
Rational theta3_lower_bound(const Rational& q);           // (3-4q+q^2)/(6+2q)
Rational one_minus_theta3_lower_bound(const Rational& q); // (6-5q+q^2)/(14-6q)
Rational kappa_lower_bound(const Rational& q);            // (2-3q+q^2)/(7-3q)

}  // namespace tscp
