#pragma once

#include "tscp/lattice.hpp"
#include "tscp/trajectory.hpp"
#include "tscp/ychain.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace tscp {

// Projection of a configuration onto the rightmost infected site and the
// four binary sites to its right: (level, z2, z3, z4, z5) with
// z_{i+1} = state of level+i.
struct XState {
    long level = 0;
    std::array<std::uint8_t, 4> bits{};
    bool operator==(const XState&) const = default;
};

// Good states: third tuple coordinate zero (the site two right of the front
// is healthy), the signature of a state entered by a downward level change.
inline bool in_good_class(const XState& x) { return x.bits[1] == 0; }
// The states entered by an upward level change: second coordinate passive.
inline bool in_bad_class(const XState& x) { return x.bits[0] == 1; }

struct PhiResult {
    std::optional<XState> state;  // nullopt iff no infected site
    bool truncated = false;       // some z-site fell past the window edge
};
// Truncated projections read the frozen boundary states and are flagged;
// trackers treat a truncated read as the end of usable data.
PhiResult phi(const Configuration& config);

// Jump chain of the projected process: the projection sampled at every ring
// of the moving 5-site segment {level .. level+4}, with consecutive
// duplicates removed.
struct EmbeddedChain {
    std::vector<XState> states;
    std::vector<double> times;  // entry time of each state; states[0] at 0
    bool extinct = false;
    double extinction_time = 0.0;
    bool truncated_by_edge = false;  // hit the window edge; caller discards
    long segment_rings = 0;          // number of segment ring times observed
};
EmbeddedChain embedded_chain(const Trajectory& trajectory);

enum class CloseReason : std::uint8_t { BoundaryRing, RightmostMoved, TrajectoryEnd };
const char* to_string(CloseReason r);

// Maximal intervals over which both the front position and the state of the
// site at front+4 are constant. Windows tile [0, extinction or horizon); the
// final window is closed by TrajectoryEnd and excluded from statistics.
struct StableWindow {
    double start = 0.0;
    double end = 0.0;
    XState initial_x;
    CloseReason reason = CloseReason::TrajectoryEnd;
    int level_delta = 0;  // +-1 for RightmostMoved closes, else 0
};
struct StableWindowList {
    std::vector<StableWindow> windows;
    bool extinct = false;
    bool truncated_by_edge = false;
};
StableWindowList stable_windows(const Trajectory& trajectory);

// Positions in the embedded chain where the level moved, with signs. Every
// move is of size one; anything else indicates a corrupted chain and throws.
struct LevelChanges {
    std::vector<std::size_t> indices;  // j with level(states[j]) != level(states[j-1])
    std::vector<int> signs;            // +1 or -1
};
LevelChanges level_changes(const std::vector<XState>& xseq);

// Run-length decomposition of the sign sequence into alternating progressive
// and regressive intervals. start_good / start_bad classify the state the
// interval departs from (the landing state of the previous level change, or
// the chain's first state).
struct IntervalSample {
    long length = 0;
    int sign = 0;
    bool start_good = false;
    bool start_bad = false;
};
struct IntervalStats {
    std::vector<IntervalSample> intervals;
    long regress_pairs_total = 0;    // regressive steps with a successor step
    long regress_pairs_regress = 0;  // of those, successors that also regress
};
IntervalStats interval_decomposition(const LevelChanges& changes,
                                     const std::vector<XState>& xseq);

// Per-trajectory summary used for replica-level aggregation. Interval means
// are conditioned the way the large-q comparison states them: progressive
// intervals on good-class starts, regressive intervals on bad-class starts;
// the mirrored conditionings are carried alongside.
struct TrajectorySummary {
    double mean_prog_good = 0;
    long n_prog_good = 0;
    double mean_regr_bad = 0;
    long n_regr_bad = 0;
    double mean_prog_bad = 0;
    long n_prog_bad = 0;
    double mean_regr_good = 0;
    long n_regr_good = 0;
    double p_regress_after_regress = 0;
    long n_regress_pairs = 0;
    bool usable = false;  // false when truncated by the window edge
};
TrajectorySummary summarize_intervals(const Trajectory& trajectory);

// Progress estimate over glued window runs. Consecutive stable windows are
// glued until one closes with a level change; that close is the sample, and
// it is attributed to the boundary bit z5 recorded when the run opened.
// Runs cut short by the trajectory end contribute no sample.
struct ProgressEstimate {
    double p_hat = 0;
    double se = 0;
    long qualifying = 0;  // glued runs that reached a level change
    long windows = 0;     // stable windows consumed by those runs
    bool insufficient = true;
};
ProgressEstimate progress_probability(const std::vector<Trajectory>& ensemble, int boundary_bit,
                                      long min_qualifying = 100);

// Independent sampler for the same quantity: each run builds a fresh
// configuration with an infected interval, a chosen 3-bit pattern right of
// the front and the boundary bit at front+4, then runs the full dynamics
// until the front first moves, gluing across boundary rings. Patterns cycle
// deterministically so all eight are sampled equally. Runs that never see a
// front move before the horizon are counted as censored and dropped.
struct FirstWindowSpec {
    double q = 0.5;
    int boundary_bit = 1;
    long target_qualifying = 10000;
    std::uint64_t seed = 0;
    double horizon = 5000.0;
};
struct FirstWindowResult {
    long runs = 0;
    long qualifying = 0;
    long progress = 0;
    long censored = 0;
    std::array<long, 8> qualifying_by_pattern{};
    std::array<long, 8> progress_by_pattern{};
    double p_hat = 0;
    double se = 0;
    // Exact chain progress probability mixed over the empirical qualifying
    // pattern frequencies, the domination comparison target. The chain is
    // always the canonical one (passive virtual boundary): during a glued
    // run the bit at front+4 evolves freely, so pinning the comparison to a
    // healthy-boundary variant would overstate the target.
    double chain_mixture = 0;
};
FirstWindowResult first_window_experiment(const FirstWindowSpec& spec);

// Printed lower bound for witnessing a second regressive step right after a
// regressive step, as a function of q.
double alpha_formula(double q);

}  // namespace tscp
