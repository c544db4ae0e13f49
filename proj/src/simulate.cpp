#include "tscp/simulate.hpp"

namespace tscp {

namespace {
constexpr std::uint64_t kSiteStreamTag = 0x5174e5;
constexpr std::uint64_t kDrawStreamTag = 0xd7a75;
}  // namespace

RingGenerator::RingGenerator(int left, int right, std::uint64_t seed)
    : left_(left),
      right_(right),
      draw_stream_(derive_seed(seed, kDrawStreamTag)) {
    if (right < left) throw std::domain_error("RingGenerator: empty window");
    const std::uint64_t site_base = derive_seed(seed, kSiteStreamTag);
    site_streams_.reserve(static_cast<std::size_t>(right - left + 1));
    for (int x = left; x <= right; ++x) {
        site_streams_.emplace_back(derive_seed(site_base, static_cast<std::uint64_t>(x - left)));
        queue_.push({site_streams_.back().exponential(), x});
    }
}

RingGenerator::Ring RingGenerator::next() {
    HeapEntry entry = queue_.top();
    queue_.pop();
    auto& stream = site_streams_[static_cast<std::size_t>(entry.site - left_)];
    queue_.push({entry.time + stream.exponential(), entry.site});
    return {entry.time, entry.site, draw_stream_.uniform01()};
}

Trajectory simulate(const Configuration& initial, const DynamicsParams& params, double horizon,
                    std::uint64_t seed) {
    return simulate_until(initial, params, horizon, seed,
                          [](const Configuration&, const Event&) { return false; });
}

Trajectory simulate_until(const Configuration& initial, const DynamicsParams& params,
                          double horizon, std::uint64_t seed,
                          const std::function<bool(const Configuration&, const Event&)>& stop) {
    if (!(horizon > 0.0)) throw std::domain_error("simulate: horizon must be positive");
    Trajectory trajectory{seed, params, initial, horizon, {}};
    Configuration config = initial;
    RingGenerator rings(initial.left(), initial.right(), seed);
    // E[#rings] = window size * horizon; reserving avoids regrowth churn.
    trajectory.events.reserve(static_cast<std::size_t>(
        static_cast<double>(initial.size()) * horizon * 1.1) + 16);
    for (;;) {
        const RingGenerator::Ring ring = rings.next();
        if (ring.time > horizon) break;
        const SiteState updated =
            next_state(config.at(ring.site), neighbor_flags(config, ring.site), ring.draw, params);
        config.set(ring.site, updated);
        trajectory.events.push_back({ring.time, ring.site, ring.draw, updated});
        if (stop(config, trajectory.events.back())) break;
    }
    return trajectory;
}

std::pair<Trajectory, Trajectory> run_coupled_pair(const Configuration& eta1,
                                                   const Configuration& eta2,
                                                   const DynamicsParams& params, double horizon,
                                                   std::uint64_t seed) {
    if (eta1.left() != eta2.left() || eta1.right() != eta2.right() ||
        !(eta1.boundary() == eta2.boundary()))
        throw std::domain_error("run_coupled_pair: mismatched windows");
    auto result = run_coupled({{eta1, params}, {eta2, params}}, horizon, seed);
    return {std::move(result[0]), std::move(result[1])};
}

std::vector<Trajectory> run_coupled(const std::vector<CoupledLane>& lanes, double horizon,
                                    std::uint64_t seed) {
    if (lanes.empty()) throw std::domain_error("run_coupled: no lanes");
    if (!(horizon > 0.0)) throw std::domain_error("run_coupled: horizon must be positive");
    const int left = lanes.front().config.left();
    const int right = lanes.front().config.right();
    for (const auto& lane : lanes)
        if (lane.config.left() != left || lane.config.right() != right)
            throw std::domain_error("run_coupled: mismatched windows");

    std::vector<Trajectory> trajectories;
    std::vector<Configuration> configs;
    trajectories.reserve(lanes.size());
    configs.reserve(lanes.size());
    for (const auto& lane : lanes) {
        trajectories.push_back({seed, lane.params, lane.config, horizon, {}});
        configs.push_back(lane.config);
    }

    RingGenerator rings(left, right, seed);
    for (;;) {
        const RingGenerator::Ring ring = rings.next();
        if (ring.time > horizon) break;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const SiteState updated =
                next_state(configs[i].at(ring.site), neighbor_flags(configs[i], ring.site),
                           ring.draw, lanes[i].params);
            configs[i].set(ring.site, updated);
            trajectories[i].events.push_back({ring.time, ring.site, ring.draw, updated});
        }
    }
    return trajectories;
}

}  // namespace tscp
