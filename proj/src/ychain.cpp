#include "tscp/ychain.hpp"

#include <algorithm>
#include <stdexcept>

namespace tscp {

namespace {

SiteState bit_state(int bit) { return bit ? SiteState::Passive : SiteState::Healthy; }

constexpr std::uint8_t kCanonicalUpLanding = 0b101;

struct RawEdge {
    int level_shift;
    std::uint8_t target;
    Rational prob;  // unnormalized: ring choice (1/4) times branch probability
};

// Enumerates the non-self-loop outcomes of one ring on the four tracked
// sites. Site offsets: 0 is the level site (infected, with an infected
// virtual left neighbor), 1..3 carry the pattern bits, offset 4 is the
// frozen virtual boundary.
std::vector<RawEdge> raw_edges(std::uint8_t pattern, const Rational& q,
                               YVirtualBoundary boundary,
                               std::optional<std::uint8_t>& raw_up_landing) {
    const auto bits = y_bits(pattern);
    const SiteState beta =
        boundary == YVirtualBoundary::Passive ? SiteState::Passive : SiteState::Healthy;
    const int beta_bit = beta == SiteState::Passive ? 1 : 0;
    const Rational quarter(1, 4);
    std::vector<RawEdge> edges;

    auto emit = [&](int shift, std::uint8_t target, const Rational& p) {
        if (p == 0) return;
        edges.push_back({shift, target, quarter * p});
    };

    // Offset 0: the infected level site. Healing moves the level down; the
    // landing pattern shifts the old bits right and records the heal value.
    {
        const auto law = update_law(SiteState::Infected, SiteState::Infected, bit_state(bits[0]), q);
        for (const auto& [state, p] : law) {
            if (state == SiteState::Infected) continue;  // self-loop
            const int healed = state == SiteState::Passive ? 1 : 0;
            emit(-1, y_pattern(healed, bits[0], bits[1]), p);
        }
    }
    // Offset 1: infection here moves the level up. The raw landing would be
    // (w3, w4, boundary); the canonical kernel replaces it by (1,0,1), the
    // post-advance neighborhood every printed identity presumes.
    {
        const auto law = update_law(bit_state(bits[0]), SiteState::Infected, bit_state(bits[1]), q);
        for (const auto& [state, p] : law) {
            const int as_bit = state == SiteState::Passive ? 1 : 0;
            if (state == SiteState::Infected) {
                raw_up_landing = y_pattern(bits[1], bits[2], beta_bit);
                emit(+1, kCanonicalUpLanding, p);
            } else if (as_bit != bits[0]) {
                emit(0, y_pattern(as_bit, bits[1], bits[2]), p);
            }
        }
    }
    // Offset 2: plain resampling between its two pattern neighbors.
    {
        const auto law = update_law(bit_state(bits[1]), bit_state(bits[0]), bit_state(bits[2]), q);
        for (const auto& [state, p] : law) {
            const int as_bit = state == SiteState::Passive ? 1 : 0;
            if (state != SiteState::Infected && as_bit != bits[1])
                emit(0, y_pattern(bits[0], as_bit, bits[2]), p);
        }
    }
    // Offset 3: resampling against the frozen virtual boundary.
    {
        const auto law = update_law(bit_state(bits[2]), bit_state(bits[1]), beta, q);
        for (const auto& [state, p] : law) {
            const int as_bit = state == SiteState::Passive ? 1 : 0;
            if (state != SiteState::Infected && as_bit != bits[2])
                emit(0, y_pattern(bits[0], bits[1], as_bit), p);
        }
    }
    return edges;
}

void fail_identity(const std::string& name) {
    throw std::logic_error("y-kernel reconstruction violates identity: " + name);
}

}  // namespace

Rational cycle_weight_a(const Rational& q) { return (1 - q) / (2 * (3 - q)); }
Rational cycle_weight_b(const Rational& q) { return (1 - q) / (2 * (2 - q)); }

Rational edge_probability(const YKernel& kernel, std::uint8_t source, int level_shift,
                          std::uint8_t target) {
    Rational total = 0;
    for (const auto& edge : kernel.table[source])
        if (edge.level_shift == level_shift && edge.target == target) total += edge.prob;
    return total;
}

YKernel build_y_kernel(const Rational& q, YVirtualBoundary boundary, bool validate) {
    if (!(q > 0 && q < 1)) throw std::domain_error("build_y_kernel: q must lie in (0,1)");
    YKernel kernel;
    kernel.q = q;
    kernel.boundary = boundary;

    for (std::uint8_t pattern = 0; pattern < 8; ++pattern) {
        auto raw = raw_edges(pattern, q, boundary, kernel.raw_up_landing[pattern]);
        Rational mass = 0;
        for (const auto& e : raw) mass += e.prob;
        if (mass == 0) throw std::logic_error("build_y_kernel: absorbing pattern");
        auto& edges = kernel.table[pattern];
        for (const auto& e : raw) {
            const Rational p = e.prob / mass;
            auto it = std::find_if(edges.begin(), edges.end(), [&](const YEdge& existing) {
                return existing.level_shift == e.level_shift && existing.target == e.target;
            });
            if (it == edges.end())
                edges.push_back({e.level_shift, e.target, p, 0.0});
            else
                it->prob += p;
        }
        for (auto& e : edges) e.prob_d = to_double(e.prob);
    }

    if (validate) {
        for (std::uint8_t pattern = 0; pattern < 8; ++pattern) {
            Rational total = 0;
            for (const auto& e : kernel.table[pattern]) {
                if (e.level_shift < -1 || e.level_shift > 1) fail_identity("level_shift_support");
                total += e.prob;
            }
            if (total != 1) fail_identity("row_stochastic");
        }
        const Rational a = edge_probability(kernel, y_pattern(1, 0, 1), 0, y_pattern(0, 0, 1)) *
                           edge_probability(kernel, y_pattern(0, 0, 1), 0, y_pattern(1, 0, 1));
        if (a != cycle_weight_a(q)) fail_identity("two_cycle_weight_a");
        const Rational b = edge_probability(kernel, y_pattern(1, 0, 1), 0, y_pattern(1, 0, 0)) *
                           edge_probability(kernel, y_pattern(1, 0, 0), 0, y_pattern(1, 0, 1));
        if (b != cycle_weight_b(q)) fail_identity("two_cycle_weight_b");
    }
    return kernel;
}

YState y_step(const YState& state, const YKernel& kernel, SplitMix64& rng) {
    const auto& edges = kernel.table[state.pattern];
    const double u = rng.uniform01();
    double acc = 0;
    for (const auto& e : edges) {
        acc += e.prob_d;
        if (u < acc) return {state.level + e.level_shift, e.target};
    }
    const auto& last = edges.back();  // guard against rounding in the cumulative sum
    return {state.level + last.level_shift, last.target};
}

FirstPassageResult first_passage_exact(const YKernel& kernel) {
    // (I - Q) x = r, where Q holds the level-preserving transitions between
    // the 8 interior patterns and r the absorbing mass of interest.
    std::vector<std::vector<Rational>> system(8, std::vector<Rational>(8, Rational(0)));
    std::vector<Rational> up_mass(8, Rational(0));
    std::vector<Rational> ones(8, Rational(1));
    std::array<std::vector<Rational>, 8> down_mass;
    down_mass.fill(std::vector<Rational>(8, Rational(0)));

    for (std::uint8_t p = 0; p < 8; ++p) {
        system[p][p] = 1;
        for (const auto& e : kernel.table[p]) {
            if (e.level_shift == 0)
                system[p][e.target] -= e.prob;
            else if (e.level_shift == +1)
                up_mass[p] += e.prob;
            else
                down_mass[e.target][p] += e.prob;
        }
    }

    FirstPassageResult result;
    const auto up = solve_linear(system, up_mass);
    const auto steps = solve_linear(system, ones);
    for (std::uint8_t p = 0; p < 8; ++p) {
        result.exit_up[p] = up[p];
        result.mean_steps[p] = steps[p];
    }
    for (std::uint8_t target = 0; target < 8; ++target) {
        const auto landing = solve_linear(system, down_mass[target]);
        for (std::uint8_t p = 0; p < 8; ++p) result.down_landing[p][target] = landing[p];
    }
    return result;
}

Rational kappa_exact(const YKernel& kernel) {
    std::vector<std::vector<Rational>> system(8, std::vector<Rational>(8, Rational(0)));
    std::vector<Rational> rhs(8, Rational(0));
    for (std::uint8_t p = 0; p < 8; ++p) {
        system[p][p] = 1;
        for (const auto& e : kernel.table[p])
            if (e.level_shift == 0) system[p][e.target] -= e.prob;
    }
    rhs[y_pattern(0, 0, 1)] =
        edge_probability(kernel, y_pattern(0, 0, 1), -1, y_pattern(1, 0, 0));
    const auto v = solve_linear(system, rhs);
    return v[y_pattern(1, 0, 1)];
}

TwoLevelExact two_level_exact(const YKernel& kernel, std::uint8_t start_pattern) {
    const FirstPassageResult fp = first_passage_exact(kernel);
    TwoLevelExact result;
    // After a progress step the chain restarts from the canonical landing, so
    // two consecutive rises multiply through pattern (1,0,1).
    result.p_plus2 = fp.exit_up[start_pattern] * fp.exit_up[kCanonicalUpLanding];
    result.p_minus2 = 0;
    for (std::uint8_t landing = 0; landing < 8; ++landing)
        result.p_minus2 += fp.down_landing[start_pattern][landing] * (1 - fp.exit_up[landing]);
    result.p_zero = 1 - result.p_plus2 - result.p_minus2;
    result.drift = 2 * (result.p_plus2 - result.p_minus2);
    return result;
}

TwoLevelMonteCarlo two_level_monte_carlo(const YKernel& kernel, std::uint8_t start_pattern,
                                         long episodes, std::uint64_t seed) {
    constexpr long kStepCap = 1000000;
    TwoLevelMonteCarlo result;
    result.episodes = episodes;
    long plus2 = 0, zero = 0, minus2 = 0;
    double sum = 0, sumsq = 0;
    for (long i = 0; i < episodes; ++i) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        YState state{0, start_pattern};
        int changes = 0;
        long steps = 0;
        while (changes < 2 && steps < kStepCap) {
            const long before = state.level;
            state = y_step(state, kernel, rng);
            if (state.level != before) ++changes;
            ++steps;
        }
        if (changes < 2) {
            ++result.censored;
            continue;
        }
        if (state.level == 2)
            ++plus2;
        else if (state.level == -2)
            ++minus2;
        else
            ++zero;
        const double value = static_cast<double>(state.level);
        sum += value;
        sumsq += value * value;
    }
    const long n = episodes - result.censored;
    if (n > 0) {
        result.p_plus2 = static_cast<double>(plus2) / static_cast<double>(n);
        result.p_zero = static_cast<double>(zero) / static_cast<double>(n);
        result.p_minus2 = static_cast<double>(minus2) / static_cast<double>(n);
        result.drift = sum / static_cast<double>(n);
        const double variance =
            (sumsq - sum * sum / static_cast<double>(n)) / static_cast<double>(n > 1 ? n - 1 : 1);
        result.drift_se = std::sqrt(variance / static_cast<double>(n));
    }
    return result;
}

Rational theta1_lower_bound(const Rational& q) {
    return (15 - 9 * q + 3 * q * q - q * q * q) / (18 - 2 * q * q);
}
Rational theta2_lower_bound(const Rational& q) {
    return (6 - 9 * q + 4 * q * q - q * q * q) / (9 - q * q);
}
Rational theta3_lower_bound(const Rational& q) { return (3 - 4 * q + q * q) / (6 + 2 * q); }
Rational one_minus_theta3_lower_bound(const Rational& q) {
    return (6 - 5 * q + q * q) / (14 - 6 * q);
}
Rational kappa_lower_bound(const Rational& q) { return (2 - 3 * q + q * q) / (7 - 3 * q); }

std::vector<YIdentityCheck> y_identity_report(const YKernel& kernel) {
    const Rational& q = kernel.q;
    std::vector<YIdentityCheck> checks;

    bool stochastic = true;
    bool support = true;
    for (std::uint8_t p = 0; p < 8; ++p) {
        Rational total = 0;
        for (const auto& e : kernel.table[p]) {
            total += e.prob;
            if (e.level_shift < -1 || e.level_shift > 1) support = false;
        }
        if (total != 1) stochastic = false;
    }
    checks.push_back({"row_stochastic", stochastic});
    checks.push_back({"level_shift_support", support});

    const Rational a = edge_probability(kernel, y_pattern(1, 0, 1), 0, y_pattern(0, 0, 1)) *
                       edge_probability(kernel, y_pattern(0, 0, 1), 0, y_pattern(1, 0, 1));
    const Rational b = edge_probability(kernel, y_pattern(1, 0, 1), 0, y_pattern(1, 0, 0)) *
                       edge_probability(kernel, y_pattern(1, 0, 0), 0, y_pattern(1, 0, 1));
    checks.push_back({"two_cycle_weight_a", a == cycle_weight_a(q)});
    checks.push_back({"two_cycle_weight_b", b == cycle_weight_b(q)});

    const FirstPassageResult fp = first_passage_exact(kernel);
    const Rational t1 = fp.theta1();
    const Rational t2 = fp.theta2();
    const Rational t3 = fp.theta3();
    const Rational kappa = kappa_exact(kernel);

    checks.push_back({"theta1_identity", t1 == (1 + t2) / 2});
    checks.push_back({"theta2_system", t2 >= (1 - q) / (2 - q) * (t1 + t3)});
    const Rational a_exact = cycle_weight_a(q);
    checks.push_back({"theta3_system", t3 >= (t2 / 2 + a_exact * (1 - q) / 2) / (1 - a_exact)});
    checks.push_back({"theta1_lower", t1 >= theta1_lower_bound(q)});
    checks.push_back({"theta2_lower", t2 >= theta2_lower_bound(q)});
    checks.push_back({"theta3_lower", t3 >= theta3_lower_bound(q)});
    checks.push_back({"one_minus_theta3_lower", 1 - t3 >= one_minus_theta3_lower_bound(q)});
    checks.push_back({"kappa_lower", kappa >= kappa_lower_bound(q)});
    checks.push_back({"kappa_le_one_minus_theta3", kappa <= 1 - t3});
    return checks;
}

}  // namespace tscp
