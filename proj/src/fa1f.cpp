#include "tscp/fa1f.hpp"

#include "tscp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tscp {

FA1fConfig::FA1fConfig(int l, int r, std::uint8_t fill, std::uint8_t bl, std::uint8_t br)
    : left(l), right(r), boundary_left(bl), boundary_right(br) {
    if (r < l) throw std::domain_error("FA1fConfig: empty window");
    bits.assign(static_cast<std::size_t>(r - l + 1), fill);
}

FA1fConfig fa1f_step(const FA1fConfig& config, int x, double u, double q) {
    if (x < config.left || x > config.right)
        throw std::out_of_range("fa1f_step: site outside window");
    FA1fConfig next = config;
    next.set(x, fa1f_next(config.at(x), config.at(x - 1), config.at(x + 1), u, q));
    return next;
}

FA1fConfig sample_product_measure(int left, int right, double zero_density, std::uint64_t seed,
                                  std::uint8_t boundary_left, std::uint8_t boundary_right) {
    if (zero_density < 0.0 || zero_density > 1.0)
        throw std::domain_error("sample_product_measure: density outside [0,1]");
    FA1fConfig config(left, right, 1, boundary_left, boundary_right);
    SplitMix64 rng(seed);
    for (int x = left; x <= right; ++x) config.set(x, rng.uniform01() < zero_density ? 0 : 1);
    return config;
}

FourStateRun couple_two_copies(const FA1fConfig& eta0, const FA1fConfig& tilde0, double q,
                               double horizon, std::uint64_t seed,
                               const std::vector<double>& sample_times) {
    if (eta0.left != tilde0.left || eta0.right != tilde0.right)
        throw std::domain_error("couple_two_copies: mismatched windows");
    FA1fConfig eta = eta0;
    FA1fConfig tilde = tilde0;

    long discrepancies = 0;
    for (int x = eta.left; x <= eta.right; ++x)
        if (eta.at(x) != tilde.at(x)) ++discrepancies;

    FourStateRun run;
    std::vector<double> times = sample_times;
    std::sort(times.begin(), times.end());
    times.push_back(horizon);
    std::size_t next_sample = 0;

    bool was_empty = discrepancies == 0;
    RingGenerator rings(eta.left, eta.right, seed);
    for (;;) {
        const RingGenerator::Ring ring = rings.next();
        while (next_sample < times.size() && times[next_sample] < ring.time) {
            run.sample_times.push_back(times[next_sample]);
            run.discrepancy_counts.push_back(discrepancies);
            ++next_sample;
        }
        if (ring.time > horizon) break;
        ++run.events;
        const bool differed = eta.at(ring.site) != tilde.at(ring.site);
        eta.set(ring.site, fa1f_next(eta.at(ring.site), eta.at(ring.site - 1),
                                     eta.at(ring.site + 1), ring.draw, q));
        tilde.set(ring.site, fa1f_next(tilde.at(ring.site), tilde.at(ring.site - 1),
                                       tilde.at(ring.site + 1), ring.draw, q));
        const bool differs = eta.at(ring.site) != tilde.at(ring.site);
        if (differed != differs) discrepancies += differs ? 1 : -1;
        if (discrepancies == 0) was_empty = true;
        if (was_empty && discrepancies > 0) run.absorption_violated = true;
    }

    run.final_discrepancies = discrepancies;
    run.final_config.reserve(static_cast<std::size_t>(eta.size()));
    for (int x = eta.left; x <= eta.right; ++x)
        run.final_config.push_back(encode_pair(eta.at(x), tilde.at(x)));
    return run;
}

DominationRun check_three_state_domination(const FA1fConfig& eta0, const FA1fConfig& tilde0,
                                           double q, double horizon, std::uint64_t seed) {
    if (eta0.left != tilde0.left || eta0.right != tilde0.right)
        throw std::domain_error("check_three_state_domination: mismatched windows");
    auto as_state = [](std::uint8_t bit) {
        return bit ? SiteState::Passive : SiteState::Healthy;
    };
    Configuration zeta(eta0.left, eta0.right, SiteState::Passive,
                       BoundaryPolicy::frozen_pair(as_state(eta0.boundary_left),
                                                   as_state(eta0.boundary_right)));
    for (int x = eta0.left; x <= eta0.right; ++x) {
        if (eta0.at(x) != tilde0.at(x))
            zeta.set(x, SiteState::Infected);
        else
            zeta.set(x, as_state(eta0.at(x)));
    }

    FA1fConfig eta = eta0;
    FA1fConfig tilde = tilde0;
    const DynamicsParams params{q, RuleVariant::Standard};

    DominationRun run;
    auto relation_holds = [&](int x) {
        const SiteState z = zeta.at(x);
        if (z == SiteState::Infected) return true;
        const std::uint8_t z_bit = z == SiteState::Passive ? 1 : 0;
        return eta.at(x) == tilde.at(x) && eta.at(x) == z_bit;
    };

    RingGenerator rings(eta.left, eta.right, seed);
    for (;;) {
        const RingGenerator::Ring ring = rings.next();
        if (ring.time > horizon) break;
        ++run.events;
        eta.set(ring.site, fa1f_next(eta.at(ring.site), eta.at(ring.site - 1),
                                     eta.at(ring.site + 1), ring.draw, q));
        tilde.set(ring.site, fa1f_next(tilde.at(ring.site), tilde.at(ring.site - 1),
                                       tilde.at(ring.site + 1), ring.draw, q));
        zeta.set(ring.site, next_state(zeta.at(ring.site), neighbor_flags(zeta, ring.site),
                                       ring.draw, params));
        // Only the updated site can newly break the relation.
        if (!relation_holds(ring.site)) {
            ++run.violations;
            if (!run.first_violation_time) run.first_violation_time = ring.time;
        }
    }
    return run;
}

XiCurve xi_drift_experiment(int kappa, double q, const std::vector<double>& times, long replicas,
                            std::uint64_t seed, int window_left, int window_right) {
    if (kappa < 1) throw std::domain_error("xi_drift_experiment: kappa must be >= 1");
    if (window_left > -1 || window_right < kappa + 1)
        throw std::domain_error("xi_drift_experiment: window too small for kappa");
    XiCurve curve;
    curve.times = times;
    std::sort(curve.times.begin(), curve.times.end());
    curve.bound_applies = q > 0.5;
    curve.replicas = replicas;
    const std::size_t nt = curve.times.size();
    std::vector<double> sum(nt, 0.0), sumsq(nt, 0.0);

    const DynamicsParams params{q, RuleVariant::Standard};
    for (long rep = 0; rep < replicas; ++rep) {
        Configuration config(window_left, window_right, SiteState::Passive,
                             BoundaryPolicy::frozen_passive());
        config.set(kappa, SiteState::Healthy);
        RingGenerator rings(window_left, window_right,
                            derive_seed(seed, static_cast<std::uint64_t>(rep)));
        std::size_t next_time = 0;
        const double horizon = curve.times.empty() ? 0.0 : curve.times.back();
        for (;;) {
            const RingGenerator::Ring ring = rings.next();
            while (next_time < nt && curve.times[next_time] < ring.time) {
                const auto xi = dist_to_healthy(config, 0);
                const double value = xi ? static_cast<double>(*xi)
                                        : static_cast<double>(config.size() + 1);
                sum[next_time] += value;
                sumsq[next_time] += value * value;
                ++next_time;
            }
            if (next_time >= nt || ring.time > horizon) break;
            config.set(ring.site, next_state(config.at(ring.site),
                                             neighbor_flags(config, ring.site), ring.draw,
                                             params));
        }
    }

    for (std::size_t i = 0; i < nt; ++i) {
        const double n = static_cast<double>(replicas);
        const double mean = sum[i] / n;
        curve.mean.push_back(mean);
        const double var = replicas > 1 ? (sumsq[i] - n * mean * mean) / (n - 1.0) : 0.0;
        curve.se.push_back(std::sqrt(std::max(var, 0.0) / n));
        curve.bound.push_back(
            std::max(1.0, static_cast<double>(kappa) + curve.times[i] * (1.0 - 2.0 * q)));
    }
    return curve;
}

XiProcess simplified_boundary_process(double xi0, double q, double horizon, std::uint64_t seed) {
    if (xi0 < 1.0) throw std::domain_error("simplified_boundary_process: xi0 must be >= 1");
    XiProcess process;
    process.xi0 = xi0;
    double xi = xi0;
    SplitMix64 inner_clock(derive_seed(seed, 0x177e5));
    SplitMix64 outer_clock(derive_seed(seed, 0x007e5));
    SplitMix64 draws(derive_seed(seed, 0xd5a3));
    double inner_time = inner_clock.exponential();
    double outer_time = outer_clock.exponential();
    for (;;) {
        const bool inner = inner_time <= outer_time;
        const double time = inner ? inner_time : outer_time;
        if (time > horizon) break;
        const double u = draws.uniform01();
        ++process.rings;
        int step = 0;
        if (inner) {
            if (u < q) step = -1;
            inner_time += inner_clock.exponential();
        } else {
            if (u >= q) step = +1;
            outer_time += outer_clock.exponential();
        }
        if (step != 0) {
            xi += step;
            ++process.position_changes;
            process.moves.push_back({time, step, inner});
            if (xi <= 0.0) {
                process.absorbed = true;
                process.absorbed_time = time;
                break;
            }
        }
    }
    process.final_xi = xi;
    return process;
}

XiDominationRun check_xi_domination(int kappa, double q, double horizon, std::uint64_t seed,
                                    int window_left, int window_right) {
    Configuration config(window_left, window_right, SiteState::Passive,
                         BoundaryPolicy::frozen_passive());
    config.set(kappa, SiteState::Healthy);
    const DynamicsParams params{q, RuleVariant::Standard};

    XiDominationRun run;
    long walk = kappa;
    RingGenerator rings(window_left, window_right, seed);
    for (;;) {
        const RingGenerator::Ring ring = rings.next();
        if (ring.time > horizon) break;
        // The walk consumes the rings of its own two tracked sites before the
        // configuration update lands, mirroring the idealized reading of the
        // same draw.
        if (ring.site == static_cast<int>(walk) - 1 && ring.draw < q)
            --walk;
        else if (ring.site == static_cast<int>(walk) && ring.draw >= q)
            ++walk;
        config.set(ring.site, next_state(config.at(ring.site),
                                         neighbor_flags(config, ring.site), ring.draw, params));
        const auto xi = dist_to_healthy(config, 0);
        ++run.checks;
        if (xi && static_cast<long>(*xi) > walk) ++run.violations;
        run.stopped_at = ring.time;
        if (walk <= 1) break;
    }
    return run;
}

}  // namespace tscp
