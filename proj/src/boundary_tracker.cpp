#include "tscp/boundary_tracker.hpp"

#include "tscp/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace tscp {

namespace {

// Walks a trajectory keeping the configuration and the front position
// current. Recomputing the front from scratch per event would dominate the
// cost of every tracker, so it is maintained incrementally.
struct FrontTracker {
    Configuration config;
    std::optional<int> front;

    explicit FrontTracker(const Configuration& initial)
        : config(initial), front(rightmost_infected(initial)) {}

    void apply(const Event& e) {
        const SiteState old = config.at(e.site);
        config.set(e.site, e.new_state);
        if (e.new_state == SiteState::Infected) {
            if (!front || e.site > *front) front = e.site;
        } else if (old == SiteState::Infected && front && e.site == *front) {
            int x = e.site - 1;
            while (x >= config.left() && config.at(x) != SiteState::Infected) --x;
            if (x >= config.left())
                front = x;
            else
                front.reset();
        }
    }
};

PhiResult phi_at(const Configuration& config, int front) {
    PhiResult result;
    XState x;
    x.level = front;
    for (int i = 1; i <= 4; ++i) {
        const SiteState s = config.at(front + i);
        if (s == SiteState::Infected)
            throw std::logic_error("phi: infected site right of the front");
        x.bits[static_cast<std::size_t>(i - 1)] = s == SiteState::Passive ? 1 : 0;
    }
    result.truncated = front + 4 > config.right();
    result.state = x;
    return result;
}

}  // namespace

PhiResult phi(const Configuration& config) {
    const auto front = rightmost_infected(config);
    if (!front) return {};
    return phi_at(config, *front);
}

const char* to_string(CloseReason r) {
    switch (r) {
        case CloseReason::BoundaryRing: return "boundary_ring";
        case CloseReason::RightmostMoved: return "rightmost_moved";
        case CloseReason::TrajectoryEnd: return "trajectory_end";
    }
    return "?";
}

EmbeddedChain embedded_chain(const Trajectory& trajectory) {
    EmbeddedChain chain;
    FrontTracker tracker(trajectory.initial);
    if (!tracker.front)
        throw std::domain_error("embedded_chain: initial configuration has no infected site");
    PhiResult p0 = phi_at(tracker.config, *tracker.front);
    if (p0.truncated) {
        chain.truncated_by_edge = true;
        return chain;
    }
    chain.states.push_back(*p0.state);
    chain.times.push_back(0.0);
    for (const Event& e : trajectory.events) {
        const int front = *tracker.front;
        const bool segment_ring = e.site >= front && e.site <= front + 4;
        tracker.apply(e);
        if (!segment_ring) continue;
        ++chain.segment_rings;
        if (!tracker.front) {
            chain.extinct = true;
            chain.extinction_time = e.time;
            break;
        }
        PhiResult pr = phi_at(tracker.config, *tracker.front);
        if (pr.truncated) {
            chain.truncated_by_edge = true;
            break;
        }
        if (!(*pr.state == chain.states.back())) {
            chain.states.push_back(*pr.state);
            chain.times.push_back(e.time);
        }
    }
    return chain;
}

StableWindowList stable_windows(const Trajectory& trajectory) {
    StableWindowList result;
    FrontTracker tracker(trajectory.initial);
    if (!tracker.front)
        throw std::domain_error("stable_windows: initial configuration has no infected site");
    PhiResult p0 = phi_at(tracker.config, *tracker.front);
    if (p0.truncated) {
        result.truncated_by_edge = true;
        return result;
    }
    double window_start = 0.0;
    XState initial_x = *p0.state;

    auto reopen = [&](double at) -> bool {
        PhiResult pr = phi_at(tracker.config, *tracker.front);
        if (pr.truncated) {
            result.truncated_by_edge = true;
            return false;
        }
        window_start = at;
        initial_x = *pr.state;
        return true;
    };

    for (const Event& e : trajectory.events) {
        const int front = *tracker.front;
        if (e.site == front + 4) {
            tracker.apply(e);  // a ring here can never move the front
            result.windows.push_back(
                {window_start, e.time, initial_x, CloseReason::BoundaryRing, 0});
            if (!reopen(e.time)) return result;
            continue;
        }
        tracker.apply(e);
        if (!tracker.front) {
            result.windows.push_back(
                {window_start, e.time, initial_x, CloseReason::TrajectoryEnd, 0});
            result.extinct = true;
            return result;
        }
        if (*tracker.front != front) {
            result.windows.push_back({window_start, e.time, initial_x,
                                      CloseReason::RightmostMoved, *tracker.front - front});
            if (!reopen(e.time)) return result;
        }
    }
    result.windows.push_back(
        {window_start, trajectory.horizon, initial_x, CloseReason::TrajectoryEnd, 0});
    return result;
}

LevelChanges level_changes(const std::vector<XState>& xseq) {
    LevelChanges changes;
    for (std::size_t j = 1; j < xseq.size(); ++j) {
        const long delta = xseq[j].level - xseq[j - 1].level;
        if (delta == 0) continue;
        if (delta != 1 && delta != -1)
            throw std::logic_error("level_changes: level moved by more than one");
        changes.indices.push_back(j);
        changes.signs.push_back(static_cast<int>(delta));
    }
    return changes;
}

IntervalStats interval_decomposition(const LevelChanges& changes,
                                     const std::vector<XState>& xseq) {
    IntervalStats stats;
    const std::size_t n = changes.signs.size();
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && changes.signs[j] == changes.signs[i]) ++j;
        // The interval departs from the landing state of the previous level
        // change (the chain's first state for the leading interval).
        const XState& start = i == 0 ? xseq.front() : xseq[changes.indices[i - 1]];
        stats.intervals.push_back({static_cast<long>(j - i), changes.signs[i],
                                   in_good_class(start), in_bad_class(start)});
        i = j;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (changes.signs[i] != -1) continue;
        ++stats.regress_pairs_total;
        if (changes.signs[i + 1] == -1) ++stats.regress_pairs_regress;
    }
    return stats;
}

TrajectorySummary summarize_intervals(const Trajectory& trajectory) {
    TrajectorySummary summary;
    const EmbeddedChain chain = embedded_chain(trajectory);
    if (chain.truncated_by_edge) return summary;
    summary.usable = true;
    const LevelChanges changes = level_changes(chain.states);
    const IntervalStats stats = interval_decomposition(changes, chain.states);

    // The last interval is cut off by the trajectory end, so its true length
    // is unknown; dropping it avoids length bias.
    const std::size_t complete =
        stats.intervals.empty() ? 0 : stats.intervals.size() - 1;
    double sum_pg = 0, sum_rb = 0, sum_pb = 0, sum_rg = 0;
    for (std::size_t i = 0; i < complete; ++i) {
        const IntervalSample& s = stats.intervals[i];
        if (s.sign == +1) {
            if (s.start_good) {
                sum_pg += static_cast<double>(s.length);
                ++summary.n_prog_good;
            }
            if (s.start_bad) {
                sum_pb += static_cast<double>(s.length);
                ++summary.n_prog_bad;
            }
        } else {
            if (s.start_bad) {
                sum_rb += static_cast<double>(s.length);
                ++summary.n_regr_bad;
            }
            if (s.start_good) {
                sum_rg += static_cast<double>(s.length);
                ++summary.n_regr_good;
            }
        }
    }
    if (summary.n_prog_good > 0) summary.mean_prog_good = sum_pg / summary.n_prog_good;
    if (summary.n_regr_bad > 0) summary.mean_regr_bad = sum_rb / summary.n_regr_bad;
    if (summary.n_prog_bad > 0) summary.mean_prog_bad = sum_pb / summary.n_prog_bad;
    if (summary.n_regr_good > 0) summary.mean_regr_good = sum_rg / summary.n_regr_good;
    summary.n_regress_pairs = stats.regress_pairs_total;
    if (stats.regress_pairs_total > 0)
        summary.p_regress_after_regress = static_cast<double>(stats.regress_pairs_regress) /
                                          static_cast<double>(stats.regress_pairs_total);
    return summary;
}

ProgressEstimate progress_probability(const std::vector<Trajectory>& ensemble, int boundary_bit,
                                      long min_qualifying) {
    ProgressEstimate estimate;
    long progress = 0;
    for (const Trajectory& trajectory : ensemble) {
        const StableWindowList list = stable_windows(trajectory);
        int run_bit = -1;  // boundary bit when the current glued run opened
        long run_windows = 0;
        for (const StableWindow& w : list.windows) {
            if (w.reason == CloseReason::TrajectoryEnd) break;
            if (run_bit < 0) run_bit = w.initial_x.bits[3];
            ++run_windows;
            if (w.reason != CloseReason::RightmostMoved) continue;
            if (run_bit == boundary_bit) {
                ++estimate.qualifying;
                estimate.windows += run_windows;
                if (w.level_delta > 0) ++progress;
            }
            run_bit = -1;
            run_windows = 0;
        }
    }
    if (estimate.qualifying > 0) {
        estimate.p_hat = static_cast<double>(progress) / static_cast<double>(estimate.qualifying);
        estimate.se = std::sqrt(estimate.p_hat * (1.0 - estimate.p_hat) /
                                static_cast<double>(estimate.qualifying));
    }
    estimate.insufficient = estimate.qualifying < min_qualifying;
    return estimate;
}

FirstWindowResult first_window_experiment(const FirstWindowSpec& spec) {
    constexpr int kLeft = -12;
    constexpr int kRight = 8;
    constexpr int kIntervalLeft = -8;
    const DynamicsParams params{spec.q, RuleVariant::Standard};

    FirstWindowResult result;
    for (long run = 0; result.qualifying < spec.target_qualifying; ++run) {
        const int pattern = static_cast<int>(run % 8);
        const auto bits = y_bits(static_cast<std::uint8_t>(pattern));
        Configuration config(kLeft, kRight, SiteState::Passive, BoundaryPolicy::frozen_passive());
        for (int x = kIntervalLeft; x <= 0; ++x) config.set(x, SiteState::Infected);
        for (int i = 0; i < 3; ++i)
            config.set(1 + i, bits[static_cast<std::size_t>(i)] ? SiteState::Passive
                                                                : SiteState::Healthy);
        config.set(4, spec.boundary_bit ? SiteState::Passive : SiteState::Healthy);

        ++result.runs;
        RingGenerator rings(kLeft, kRight, derive_seed(spec.seed, static_cast<std::uint64_t>(run)));
        constexpr int front = 0;
        int delta = 0;
        for (;;) {
            const RingGenerator::Ring ring = rings.next();
            if (ring.time > spec.horizon) break;
            const SiteState old = config.at(ring.site);
            const SiteState updated =
                next_state(old, neighbor_flags(config, ring.site), ring.draw, params);
            config.set(ring.site, updated);
            if (ring.site == front && old == SiteState::Infected &&
                updated != SiteState::Infected) {
                delta = -1;
                break;
            }
            if (ring.site == front + 1 && updated == SiteState::Infected) {
                delta = +1;
                break;
            }
        }
        if (delta == 0) {
            ++result.censored;
            continue;
        }
        ++result.qualifying;
        ++result.qualifying_by_pattern[static_cast<std::size_t>(pattern)];
        if (delta > 0) {
            ++result.progress;
            ++result.progress_by_pattern[static_cast<std::size_t>(pattern)];
        }
    }

    result.p_hat = static_cast<double>(result.progress) / static_cast<double>(result.qualifying);
    result.se = std::sqrt(result.p_hat * (1.0 - result.p_hat) /
                          static_cast<double>(result.qualifying));

    // Mixture target: exact chain progress probabilities weighted by the
    // empirical pattern frequencies among qualifying runs. The canonical
    // kernel (passive virtual boundary) is the right target for both bits:
    // a healthy bit at front+4 is free to flip during the run, so the
    // healthy-boundary kernel variant, which pins it, is not what the glued
    // dynamics realizes.
    const YKernel kernel = build_y_kernel(Rational(spec.q), YVirtualBoundary::Passive, true);
    const FirstPassageResult fp = first_passage_exact(kernel);
    double mixture = 0;
    for (int p = 0; p < 8; ++p) {
        const double weight = static_cast<double>(result.qualifying_by_pattern[p]) /
                              static_cast<double>(result.qualifying);
        mixture += weight * to_double(fp.exit_up[static_cast<std::uint8_t>(p)]);
    }
    result.chain_mixture = mixture;
    return result;
}

double alpha_formula(double q) {
    const double first = q / ((2.0 - q) * (4.0 - 3.0 * q));
    const double second = (1.0 / (3.0 - q)) * (1.0 + q / (4.0 - 3.0 * q));
    return std::min(first, second);
}

}  // namespace tscp
