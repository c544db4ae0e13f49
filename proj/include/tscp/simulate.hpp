#pragma once

#include "tscp/lattice.hpp"
#include "tscp/rng.hpp"
#include "tscp/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

namespace tscp {

// Shared source of clock rings and uniform draws for a window of sites.
// Each site carries an independent Exponential(1) clock; rings are delivered
// in time order with ties (never observed in practice) broken by site index.
// All coupled copies of a run consume the same RingGenerator, which is
// exactly the shared-clock, shared-draw coupling.
class RingGenerator {
  public:
    struct Ring {
        double time;
        int site;
        double draw;
    };

    RingGenerator(int left, int right, std::uint64_t seed);

    Ring next();

    int left() const noexcept { return left_; }
    int right() const noexcept { return right_; }

  private:
    struct HeapEntry {
        double time;
        int site;
        bool operator>(const HeapEntry& other) const noexcept {
            if (time != other.time) return time > other.time;
            return site > other.site;
        }
    };

    int left_;
    int right_;
    std::vector<SplitMix64> site_streams_;
    SplitMix64 draw_stream_;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> queue_;
};

// Event-driven run over [0, horizon]. Deterministic in (initial, params,
// horizon, seed); replaying the returned event list from `initial`
// reproduces every intermediate state.
Trajectory simulate(const Configuration& initial, const DynamicsParams& params, double horizon,
                    std::uint64_t seed);

// Same run, stopping early when `stop` returns true for the post-update
// configuration and the event just applied.
Trajectory simulate_until(const Configuration& initial, const DynamicsParams& params,
                          double horizon, std::uint64_t seed,
                          const std::function<bool(const Configuration&, const Event&)>& stop);

// Two copies driven by one RingGenerator: identical ring times and draws.
// The copies may differ only in their initial states.
std::pair<Trajectory, Trajectory> run_coupled_pair(const Configuration& eta1,
                                                   const Configuration& eta2,
                                                   const DynamicsParams& params, double horizon,
                                                   std::uint64_t seed);

// General coupled execution: each lane owns its configuration and rule
// parameters but all lanes share clocks and draws. Used for the
// variant-domination checks, where the lanes differ in variant rather than
// initial state.
struct CoupledLane {
    Configuration config;
    DynamicsParams params;
};
std::vector<Trajectory> run_coupled(const std::vector<CoupledLane>& lanes, double horizon,
                                    std::uint64_t seed);

}  // namespace tscp
