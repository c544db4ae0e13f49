#include "tscp/lattice.hpp"

namespace tscp {

std::string BoundaryPolicy::label() const {
    if (left == SiteState::Healthy && right == SiteState::Healthy) return "frozen_healthy";
    if (left == SiteState::Passive && right == SiteState::Passive) return "frozen_passive";
    std::string s = "frozen_pair(";
    s += to_string(left);
    s += ",";
    s += to_string(right);
    s += ")";
    return s;
}

Configuration::Configuration(int left, int right, SiteState fill, BoundaryPolicy boundary)
    : left_(left), right_(right), boundary_(boundary) {
    if (right < left) throw std::domain_error("Configuration: empty window");
    states_.assign(static_cast<std::size_t>(right - left + 1), fill);
}

void Configuration::set(int x, SiteState s) {
    if (!in_window(x)) throw std::out_of_range("Configuration::set: site outside window");
    states_[static_cast<std::size_t>(x - left_)] = s;
}

NeighborFlags neighbor_flags(const Configuration& config, int x) {
    if (!config.in_window(x)) throw std::out_of_range("neighbor_flags: site outside window");
    const SiteState l = config.at(x - 1);
    const SiteState r = config.at(x + 1);
    const bool some_healthy = l == SiteState::Healthy || r == SiteState::Healthy;
    const bool some_infected = l == SiteState::Infected || r == SiteState::Infected;
    return {some_healthy, !some_healthy && some_infected};
}

Configuration apply_update(const Configuration& config, int x, double u,
                           const DynamicsParams& params) {
    if (u < 0.0 || u >= 1.0) throw std::domain_error("apply_update: u outside [0,1)");
    Configuration next = config;
    next.set(x, next_state(config.at(x), neighbor_flags(config, x), u, params));
    return next;
}

std::optional<int> rightmost_infected(const Configuration& config) {
    for (int x = config.right(); x >= config.left(); --x)
        if (config.at(x) == SiteState::Infected) return x;
    return std::nullopt;
}

InfectedInterval infected_interval(const Configuration& config) {
    InfectedInterval result;
    for (int x = config.left(); x <= config.right(); ++x) {
        if (config.at(x) != SiteState::Infected) continue;
        if (result.empty) {
            result = {false, x, x, true};
        } else {
            result.hi = x;
        }
    }
    if (!result.empty) {
        for (int x = result.lo; x <= result.hi; ++x)
            if (config.at(x) != SiteState::Infected) {
                result.connected = false;
                break;
            }
    }
    return result;
}

std::optional<int> dist_to_healthy(const Configuration& config, int x) {
    if (!config.in_window(x)) throw std::out_of_range("dist_to_healthy: site outside window");
    std::optional<int> best;
    for (int y = config.left(); y <= config.right(); ++y) {
        if (config.at(y) != SiteState::Healthy) continue;
        const int d = y >= x ? y - x : x - y;
        if (!best || d < *best) best = d;
    }
    if (config.boundary().left == SiteState::Healthy) {
        const int d = x - (config.left() - 1);
        if (!best || d < *best) best = d;
    }
    if (config.boundary().right == SiteState::Healthy) {
        const int d = (config.right() + 1) - x;
        if (!best || d < *best) best = d;
    }
    return best;
}

const char* to_string(SiteState s) {
    switch (s) {
        case SiteState::Healthy: return "healthy";
        case SiteState::Passive: return "passive";
        case SiteState::Infected: return "infected";
    }
    return "?";
}

const char* to_string(RuleVariant v) {
    return v == RuleVariant::Standard ? "standard" : "greedy_infection";
}

}  // namespace tscp
