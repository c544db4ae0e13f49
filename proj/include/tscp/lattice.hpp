#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tscp {

// Site states of the three-state process: 0 enables neighbor updates,
// 1 blocks healing, 2 spreads when unblocked.
enum class SiteState : std::uint8_t { Healthy = 0, Passive = 1, Infected = 2 };

enum class RuleVariant : std::uint8_t { Standard = 0, GreedyInfection = 1 };

struct DynamicsParams {
    double q = 0.5;
    RuleVariant variant = RuleVariant::Standard;
};

// Frozen virtual states just outside the simulated window. The named
// policies are the two used by the experiment defaults; an arbitrary frozen
// pair is allowed for targeted tests.
struct BoundaryPolicy {
    SiteState left = SiteState::Passive;
    SiteState right = SiteState::Passive;

    static constexpr BoundaryPolicy frozen_healthy() {
        return {SiteState::Healthy, SiteState::Healthy};
    }
    static constexpr BoundaryPolicy frozen_passive() {
        return {SiteState::Passive, SiteState::Passive};
    }
    static constexpr BoundaryPolicy frozen_pair(SiteState l, SiteState r) { return {l, r}; }

    std::string label() const;
    bool operator==(const BoundaryPolicy&) const = default;
};

// Finite window [left, right] of sites. Reads outside the window return the
// frozen boundary state of that side, at any distance; the dynamics only ever
// look one site past the edge, but diagnostic projections near the edge may
// read farther and must see a consistent frozen environment.
class Configuration {
  public:
    Configuration(int left, int right, SiteState fill, BoundaryPolicy boundary);

    int left() const noexcept { return left_; }
    int right() const noexcept { return right_; }
    int size() const noexcept { return right_ - left_ + 1; }
    bool in_window(int x) const noexcept { return x >= left_ && x <= right_; }
    const BoundaryPolicy& boundary() const noexcept { return boundary_; }

    SiteState at(int x) const noexcept {
        if (x < left_) return boundary_.left;
        if (x > right_) return boundary_.right;
        return states_[static_cast<std::size_t>(x - left_)];
    }
    void set(int x, SiteState s);

    bool operator==(const Configuration&) const = default;

  private:
    int left_;
    int right_;
    BoundaryPolicy boundary_;
    std::vector<SiteState> states_;
};

struct NeighborFlags {
    bool constrained;        // some neighbor healthy: the resampling rule applies
    bool infection_enabled;  // no healthy neighbor, some neighbor infected
};

// Flags are mutually exclusive by construction. Throws std::out_of_range for
// sites outside the window.
NeighborFlags neighbor_flags(const Configuration& config, int x);

// One update reading a single uniform draw. The same threshold layout is used
// by every rule branch so that coupled copies sharing draws stay aligned: the
// u < q branch is always the one a healthy-producing resample would take.
//   constrained:          u < q -> Healthy, else Passive (any current state)
//   infection_enabled, Healthy: u < q -> Healthy, else Infected
//   infection_enabled, Passive: u < q -> Infected, else Passive
//   infection_enabled, Infected: Infected
//   GreedyInfection replaces the infection_enabled branch by: always Infected.
inline SiteState next_state(SiteState current, NeighborFlags flags, double u,
                            const DynamicsParams& params) noexcept {
    if (flags.constrained) return u < params.q ? SiteState::Healthy : SiteState::Passive;
    if (flags.infection_enabled) {
        if (params.variant == RuleVariant::GreedyInfection) return SiteState::Infected;
        switch (current) {
            case SiteState::Healthy: return u < params.q ? SiteState::Healthy : SiteState::Infected;
            case SiteState::Passive: return u < params.q ? SiteState::Infected : SiteState::Passive;
            case SiteState::Infected: return SiteState::Infected;
        }
    }
    return current;
}

// Pure form of a single-site update; tests and examples use it, the simulator
// uses next_state directly.
Configuration apply_update(const Configuration& config, int x, double u,
                           const DynamicsParams& params);

// Distribution of next_state over u for fixed current state and neighbor
// states, with probabilities in an arbitrary field. This is the single source
// of the rule for the exact chain reconstruction; a test cross-checks it
// against next_state threshold by threshold.
template <class Prob>
std::vector<std::pair<SiteState, Prob>> update_law(SiteState current, SiteState left_neighbor,
                                                   SiteState right_neighbor, const Prob& q,
                                                   RuleVariant variant = RuleVariant::Standard) {
    const bool some_healthy =
        left_neighbor == SiteState::Healthy || right_neighbor == SiteState::Healthy;
    const bool some_infected =
        left_neighbor == SiteState::Infected || right_neighbor == SiteState::Infected;
    const Prob one(1);
    if (some_healthy) return {{SiteState::Healthy, q}, {SiteState::Passive, one - q}};
    if (some_infected) {
        if (variant == RuleVariant::GreedyInfection) return {{SiteState::Infected, one}};
        switch (current) {
            case SiteState::Healthy:
                return {{SiteState::Healthy, q}, {SiteState::Infected, one - q}};
            case SiteState::Passive:
                return {{SiteState::Infected, q}, {SiteState::Passive, one - q}};
            case SiteState::Infected: return {{SiteState::Infected, one}};
        }
    }
    return {{current, one}};
}

std::optional<int> rightmost_infected(const Configuration& config);

struct InfectedInterval {
    bool empty = true;
    int lo = 0;
    int hi = 0;
    bool connected = true;  // vacuously true when empty
};
InfectedInterval infected_interval(const Configuration& config);

// Distance from x to the nearest Healthy site, counting the frozen virtual
// sites at left-1 / right+1 when the policy makes them healthy. nullopt means
// no healthy site is reachable at all.
std::optional<int> dist_to_healthy(const Configuration& config, int x);

const char* to_string(SiteState s);
const char* to_string(RuleVariant v);

}  // namespace tscp
