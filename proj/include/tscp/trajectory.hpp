#pragma once

#include "tscp/lattice.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace tscp {

// One clock ring. Every ring is recorded, including those that leave the
// state unchanged, so per-site event counts carry the clock statistics.
struct Event {
    double time;
    int site;
    double draw;
    SiteState new_state;
};

struct Trajectory {
    std::uint64_t seed = 0;
    DynamicsParams params;
    Configuration initial;
    double horizon = 0.0;
    std::vector<Event> events;
};

// Forward scan over a trajectory maintaining the current configuration.
class Replay {
  public:
    explicit Replay(const Trajectory& trajectory)
        : trajectory_(&trajectory), config_(trajectory.initial) {}

    bool done() const noexcept { return index_ >= trajectory_->events.size(); }
    const Event& peek() const { return trajectory_->events[index_]; }

    // Applies the next event and returns it.
    const Event& step() {
        const Event& e = trajectory_->events[index_++];
        config_.set(e.site, e.new_state);
        time_ = e.time;
        return e;
    }

    const Configuration& config() const noexcept { return config_; }
    double time() const noexcept { return time_; }
    std::size_t index() const noexcept { return index_; }

  private:
    const Trajectory* trajectory_;
    Configuration config_;
    double time_ = 0.0;
    std::size_t index_ = 0;
};

// Configuration at the largest event time <= t (the post-update state).
Configuration snapshot_at(const Trajectory& trajectory, double t);

// Event log export: header line naming q, seed, window, boundary, variant and
// horizon, then time,site,draw,new_state rows.
void write_events_csv(std::ostream& out, const Trajectory& trajectory);

// Snapshot export: same header plus the snapshot time, then site,state rows.
void write_snapshot_csv(std::ostream& out, const Trajectory& trajectory,
                        const Configuration& config, double time);

}  // namespace tscp
