#include "tscp/sweep.hpp"

#include "tscp/boundary_tracker.hpp"
#include "tscp/csv.hpp"
#include "tscp/fa1f.hpp"
#include "tscp/rng.hpp"
#include "tscp/simulate.hpp"
#include "tscp/stats.hpp"
#include "tscp/thread_pool.hpp"
#include "tscp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tscp {

const char* to_string(Observable o) {
    switch (o) {
        case Observable::Survival: return "survival";
        case Observable::RightmostDrift: return "rightmost_drift";
        case Observable::IntervalStats: return "interval_stats";
        case Observable::XiDrift: return "xi_drift";
        case Observable::DiscrepancyDensity: return "discrepancy_density";
    }
    return "?";
}

const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::SingleInfected: return "single_infected";
        case InitKind::InfectedInterval: return "infected_interval";
        case InitKind::Product: return "product";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("bad value for config key '" + key + "': '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) bad_value(key, value);
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) bad_value(key, value);
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) bad_value(key, value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

SiteState parse_site_state(const std::string& key, const std::string& value) {
    if (value == "healthy") return SiteState::Healthy;
    if (value == "passive") return SiteState::Passive;
    if (value == "infected") return SiteState::Infected;
    bad_value(key, value);
}

BoundaryPolicy parse_boundary(const std::string& key, const std::string& value) {
    if (value == "frozen_passive") return BoundaryPolicy::frozen_passive();
    if (value == "frozen_healthy") return BoundaryPolicy::frozen_healthy();
    const std::string prefix = "frozen_pair:";
    if (value.rfind(prefix, 0) == 0) {
        auto parts = split_list(value.substr(prefix.size()));
        if (parts.size() != 2) bad_value(key, value);
        return BoundaryPolicy::frozen_pair(parse_site_state(key, parts[0]),
                                           parse_site_state(key, parts[1]));
    }
    bad_value(key, value);
}

Observable parse_observable(const std::string& key, const std::string& value) {
    if (value == "survival") return Observable::Survival;
    if (value == "rightmost_drift") return Observable::RightmostDrift;
    if (value == "interval_stats") return Observable::IntervalStats;
    if (value == "xi_drift") return Observable::XiDrift;
    if (value == "discrepancy_density") return Observable::DiscrepancyDensity;
    bad_value(key, value);
}

bool is_trajectory_observable(Observable o) {
    return o == Observable::Survival || o == Observable::RightmostDrift ||
           o == Observable::IntervalStats;
}

void validate_spec(const SweepSpec& spec) {
    if (spec.q_grid.empty()) throw std::invalid_argument("config key 'q_grid' is required");
    for (double q : spec.q_grid)
        if (!(q > 0.0) || !(q < 1.0))
            throw std::invalid_argument("q_grid values must lie strictly between 0 and 1");
    if (spec.observables.empty())
        throw std::invalid_argument("config key 'observables' is required");
    if (spec.window_radius < 8) throw std::invalid_argument("window_radius must be at least 8");
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (spec.replicas <= 0) throw std::invalid_argument("replicas must be positive");
    if (spec.healthy_spacing < 2) throw std::invalid_argument("healthy_spacing must be at least 2");
    if (spec.interval_left > 0)
        throw std::invalid_argument("interval_left must not be positive");
    if (!(spec.product_density >= 0.0) || !(spec.product_density <= 1.0))
        throw std::invalid_argument("product_density must lie in [0,1]");
    if (spec.xi_kappa < 1) throw std::invalid_argument("xi_kappa must be at least 1");
    if (spec.threads < 1) throw std::invalid_argument("threads must be at least 1");
}

}  // namespace

SweepSpec parse_config(std::istream& in) {
    SweepSpec spec;
    spec.observables.clear();
    std::set<std::string> seen;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not of the form key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("empty config key on line " + std::to_string(line_no));
        if (!seen.insert(key).second)
            throw std::invalid_argument("duplicate config key: " + key);

        if (key == "q_grid") {
            for (const auto& item : split_list(value)) spec.q_grid.push_back(parse_double(key, item));
        } else if (key == "window_radius") {
            spec.window_radius = static_cast<int>(parse_long(key, value));
        } else if (key == "horizon") {
            spec.horizon = parse_double(key, value);
        } else if (key == "replicas") {
            spec.replicas = parse_long(key, value);
        } else if (key == "master_seed") {
            spec.master_seed = parse_u64(key, value);
        } else if (key == "boundary") {
            spec.boundary = parse_boundary(key, value);
        } else if (key == "variant") {
            if (value == "standard") spec.variant = RuleVariant::Standard;
            else if (value == "greedy_infection") spec.variant = RuleVariant::GreedyInfection;
            else bad_value(key, value);
        } else if (key == "observables") {
            for (const auto& item : split_list(value))
                spec.observables.push_back(parse_observable(key, item));
        } else if (key == "init") {
            if (value == "single_infected") spec.init = InitKind::SingleInfected;
            else if (value == "infected_interval") spec.init = InitKind::InfectedInterval;
            else if (value == "product") spec.init = InitKind::Product;
            else bad_value(key, value);
        } else if (key == "healthy_spacing") {
            spec.healthy_spacing = static_cast<int>(parse_long(key, value));
        } else if (key == "interval_left") {
            spec.interval_left = static_cast<int>(parse_long(key, value));
        } else if (key == "product_density") {
            spec.product_density = parse_double(key, value);
        } else if (key == "xi_kappa") {
            spec.xi_kappa = static_cast<int>(parse_long(key, value));
        } else if (key == "threads") {
            spec.threads = static_cast<unsigned>(parse_long(key, value));
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    validate_spec(spec);
    return spec;
}

SweepSpec parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    return parse_config(in);
}

BoundaryPolicy boundary_from_string(const std::string& text) {
    return parse_boundary("boundary", text);
}

Configuration build_initial(const SweepSpec& spec, std::uint64_t replica_seed) {
    const int R = spec.window_radius;
    Configuration config(-R, R, SiteState::Passive, spec.boundary);
    switch (spec.init) {
        case InitKind::SingleInfected: {
            for (int x = -R; x <= R; ++x)
                if (x != 0 && x % spec.healthy_spacing == 0) config.set(x, SiteState::Healthy);
            config.set(0, SiteState::Infected);
            break;
        }
        case InitKind::InfectedInterval: {
            const int lo = std::max(spec.interval_left, -R);
            for (int x = -R; x <= R; ++x)
                if ((x < lo || x > 0) && x % spec.healthy_spacing == 0)
                    config.set(x, SiteState::Healthy);
            for (int x = lo; x <= 0; ++x) config.set(x, SiteState::Infected);
            break;
        }
        case InitKind::Product: {
            SplitMix64 rng(derive_seed(replica_seed, 0x1a17));
            for (int x = -R; x <= R; ++x)
                if (rng.uniform01() < spec.product_density) config.set(x, SiteState::Healthy);
            config.set(0, SiteState::Infected);
            break;
        }
    }
    return config;
}

namespace {

struct TrajReplica {
    bool failed = false;
    std::string error;
    bool survived = false;
    bool truncated = false;
    bool extinct = false;
    double slope = 0;
    double t_end = 0;
    TrajectorySummary summary{};
};

TrajReplica run_traj_replica(const SweepSpec& spec, double q, std::uint64_t seed,
                             bool want_intervals) {
    TrajReplica r;
    try {
        Configuration init = build_initial(spec, seed);
        DynamicsParams params{q, spec.variant};
        Trajectory traj = simulate(init, params, spec.horizon, seed);
        EmbeddedChain chain = embedded_chain(traj);
        r.extinct = chain.extinct;
        r.survived = !chain.extinct;
        r.truncated = chain.truncated_by_edge;
        r.t_end = chain.extinct ? chain.extinction_time : spec.horizon;
        if (!chain.states.empty() && r.t_end > 0) {
            const long delta = chain.states.back().level - chain.states.front().level;
            r.slope = static_cast<double>(delta) / r.t_end;
        }
        if (want_intervals) r.summary = summarize_intervals(traj);
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
    }
    return r;
}

struct XiReplica {
    bool failed = false;
    std::string error;
    bool no_healthy = false;  // the healthy set died out; distance undefined
    double xi = 0;
};

XiReplica run_xi_replica(const SweepSpec& spec, double q, std::uint64_t seed) {
    XiReplica r;
    try {
        const int R = spec.window_radius;
        Configuration init(-R, R, SiteState::Passive, spec.boundary);
        if (spec.xi_kappa > R) throw std::invalid_argument("xi_kappa exceeds window_radius");
        init.set(spec.xi_kappa, SiteState::Healthy);
        DynamicsParams params{q, spec.variant};
        Trajectory traj = simulate(init, params, spec.horizon, seed);
        Configuration final_config = snapshot_at(traj, spec.horizon);
        auto d = dist_to_healthy(final_config, 0);
        if (!d) {
            r.no_healthy = true;
        } else {
            r.xi = static_cast<double>(*d);
        }
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
    }
    return r;
}

struct DiscrepancyReplica {
    bool failed = false;
    std::string error;
    double density = 0;
    bool absorption_violated = false;
};

DiscrepancyReplica run_discrepancy_replica(const SweepSpec& spec, double q, std::uint64_t seed) {
    DiscrepancyReplica r;
    try {
        const int R = spec.window_radius;
        // Two independent draws from the dynamics' product equilibrium
        // (empty-site density q), coupled through shared clocks and draws.
        FA1fConfig eta0 = sample_product_measure(-R, R, q, derive_seed(seed, 0xe7a0));
        FA1fConfig tilde0 = sample_product_measure(-R, R, q, derive_seed(seed, 0xe7a1));
        FourStateRun run = couple_two_copies(eta0, tilde0, q, spec.horizon, seed);
        r.density = static_cast<double>(run.final_discrepancies) /
                    static_cast<double>(eta0.size());
        r.absorption_violated = run.absorption_violated;
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
    }
    return r;
}

void collect_failures(ObservableCell& cell, const std::vector<std::string>& errors) {
    cell.failures = errors;
    cell.censored += static_cast<long>(errors.size());
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    validate_spec(spec);
    SweepResult result;
    result.spec = spec;

    const bool want_traj = std::any_of(spec.observables.begin(), spec.observables.end(),
                                       is_trajectory_observable);
    const bool want_intervals =
        std::count(spec.observables.begin(), spec.observables.end(), Observable::IntervalStats) > 0;

    for (std::size_t qi = 0; qi < spec.q_grid.size(); ++qi) {
        const double q = spec.q_grid[qi];
        const std::uint64_t q_seed_index = static_cast<std::uint64_t>(qi);

        std::vector<TrajReplica> traj_reps;
        if (want_traj) {
            traj_reps.resize(static_cast<std::size_t>(spec.replicas));
            parallel_for(spec.replicas, spec.threads, [&](long i) {
                const std::uint64_t seed =
                    replica_seed(spec.master_seed, q_seed_index, static_cast<std::uint64_t>(i));
                traj_reps[static_cast<std::size_t>(i)] =
                    run_traj_replica(spec, q, seed, want_intervals);
            });
        }
        std::vector<std::string> traj_errors;
        for (std::size_t i = 0; i < traj_reps.size(); ++i)
            if (traj_reps[i].failed)
                traj_errors.push_back("q=" + format_number(q) + " replica " + std::to_string(i) +
                                      ": " + traj_reps[i].error);

        for (Observable obs : spec.observables) {
            ObservableCell cell;
            cell.q = q;
            cell.q_index = qi;
            cell.observable = obs;

            switch (obs) {
                case Observable::Survival: {
                    RunningStat s;
                    for (const auto& r : traj_reps)
                        if (!r.failed) s.add(r.survived ? 1.0 : 0.0);
                    cell.replicas = s.n;
                    cell.values = {{"survival_rate", s.mean()}, {"survival_se", s.se()}};
                    collect_failures(cell, traj_errors);
                    break;
                }
                case Observable::RightmostDrift: {
                    RunningStat slope, tend;
                    long extinct = 0, truncated = 0;
                    for (const auto& r : traj_reps) {
                        if (r.failed) continue;
                        if (r.truncated) {
                            ++truncated;
                            continue;
                        }
                        slope.add(r.slope);
                        tend.add(r.t_end);
                        if (r.extinct) ++extinct;
                    }
                    cell.replicas = slope.n;
                    cell.censored = truncated;
                    cell.values = {{"slope_mean", slope.mean()},
                                   {"slope_se", slope.se()},
                                   {"mean_t_end", tend.mean()},
                                   {"extinct_fraction",
                                    slope.n > 0
                                        ? static_cast<double>(extinct) /
                                              static_cast<double>(slope.n)
                                        : 0.0}};
                    collect_failures(cell, traj_errors);
                    break;
                }
                case Observable::IntervalStats: {
                    RunningStat prog_good, regr_bad, prog_bad, regr_good;
                    long pairs_total = 0, pairs_regress = 0, truncated = 0, usable = 0;
                    for (const auto& r : traj_reps) {
                        if (r.failed) continue;
                        if (!r.summary.usable) {
                            ++truncated;
                            continue;
                        }
                        ++usable;
                        if (r.summary.n_prog_good > 0) prog_good.add(r.summary.mean_prog_good);
                        if (r.summary.n_regr_bad > 0) regr_bad.add(r.summary.mean_regr_bad);
                        if (r.summary.n_prog_bad > 0) prog_bad.add(r.summary.mean_prog_bad);
                        if (r.summary.n_regr_good > 0) regr_good.add(r.summary.mean_regr_good);
                        pairs_total += r.summary.n_regress_pairs;
                        pairs_regress += static_cast<long>(
                            r.summary.p_regress_after_regress *
                                static_cast<double>(r.summary.n_regress_pairs) +
                            0.5);
                    }
                    const double p_rr = pairs_total > 0 ? static_cast<double>(pairs_regress) /
                                                              static_cast<double>(pairs_total)
                                                        : 0.0;
                    cell.replicas = usable;
                    cell.censored = truncated;
                    cell.values = {
                        {"mean_progressive_from_good", prog_good.mean()},
                        {"se_progressive_from_good", prog_good.se()},
                        {"replicas_progressive_from_good", static_cast<double>(prog_good.n)},
                        {"mean_regressive_from_bad", regr_bad.mean()},
                        {"se_regressive_from_bad", regr_bad.se()},
                        {"replicas_regressive_from_bad", static_cast<double>(regr_bad.n)},
                        {"mean_progressive_from_bad", prog_bad.mean()},
                        {"mean_regressive_from_good", regr_good.mean()},
                        {"p_regress_after_regress", p_rr},
                        {"se_regress_after_regress", binomial_se(p_rr, pairs_total)},
                        {"n_regress_pairs", static_cast<double>(pairs_total)},
                        {"alpha_reference", alpha_formula(q)},
                    };
                    collect_failures(cell, traj_errors);
                    break;
                }
                case Observable::XiDrift: {
                    std::vector<XiReplica> reps(static_cast<std::size_t>(spec.replicas));
                    parallel_for(spec.replicas, spec.threads, [&](long i) {
                        const std::uint64_t seed = replica_seed(
                            spec.master_seed, q_seed_index, static_cast<std::uint64_t>(i));
                        reps[static_cast<std::size_t>(i)] =
                            run_xi_replica(spec, q, derive_seed(seed, 0x21d));
                    });
                    RunningStat xi;
                    long no_healthy = 0;
                    std::vector<std::string> errors;
                    for (std::size_t i = 0; i < reps.size(); ++i) {
                        const auto& r = reps[i];
                        if (r.failed) {
                            errors.push_back("q=" + format_number(q) + " replica " +
                                             std::to_string(i) + ": " + r.error);
                            continue;
                        }
                        if (r.no_healthy) {
                            ++no_healthy;
                            continue;
                        }
                        xi.add(r.xi);
                    }
                    const double bound =
                        std::max(1.0, static_cast<double>(spec.xi_kappa) +
                                          spec.horizon * (1.0 - 2.0 * q));
                    cell.replicas = xi.n;
                    cell.censored = no_healthy;
                    cell.values = {{"xi_mean", xi.mean()},
                                   {"xi_se", xi.se()},
                                   {"drift_bound", bound},
                                   {"bound_applies", q > 0.5 ? 1.0 : 0.0}};
                    collect_failures(cell, errors);
                    break;
                }
                case Observable::DiscrepancyDensity: {
                    std::vector<DiscrepancyReplica> reps(static_cast<std::size_t>(spec.replicas));
                    parallel_for(spec.replicas, spec.threads, [&](long i) {
                        const std::uint64_t seed = replica_seed(
                            spec.master_seed, q_seed_index, static_cast<std::uint64_t>(i));
                        reps[static_cast<std::size_t>(i)] =
                            run_discrepancy_replica(spec, q, derive_seed(seed, 0x4c0));
                    });
                    RunningStat density;
                    long violations = 0;
                    std::vector<std::string> errors;
                    for (std::size_t i = 0; i < reps.size(); ++i) {
                        const auto& r = reps[i];
                        if (r.failed) {
                            errors.push_back("q=" + format_number(q) + " replica " +
                                             std::to_string(i) + ": " + r.error);
                            continue;
                        }
                        density.add(r.density);
                        if (r.absorption_violated) ++violations;
                    }
                    cell.replicas = density.n;
                    cell.values = {{"density_mean", density.mean()},
                                   {"density_se", density.se()},
                                   {"absorption_violations", static_cast<double>(violations)}};
                    collect_failures(cell, errors);
                    break;
                }
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

namespace {

std::string spec_echo(const SweepSpec& spec) {
    std::string qs;
    for (std::size_t i = 0; i < spec.q_grid.size(); ++i) {
        if (i) qs += ",";
        qs += format_number(spec.q_grid[i]);
    }
    std::string obs;
    for (std::size_t i = 0; i < spec.observables.size(); ++i) {
        if (i) obs += ",";
        obs += to_string(spec.observables[i]);
    }
    return "q_grid=" + qs + " window_radius=" + format_number(spec.window_radius) +
           " horizon=" + format_number(spec.horizon) +
           " replicas=" + format_number(spec.replicas) +
           " master_seed=" + format_number(static_cast<unsigned long long>(spec.master_seed)) +
           " boundary=" + spec.boundary.label() + " variant=" + to_string(spec.variant) +
           " init=" + to_string(spec.init) +
           " healthy_spacing=" + format_number(spec.healthy_spacing) +
           " interval_left=" + format_number(spec.interval_left) +
           " product_density=" + format_number(spec.product_density) +
           " xi_kappa=" + format_number(spec.xi_kappa) + " observables=" + obs;
}

}  // namespace

void emit_report(const SweepResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    // Group cells per observable, preserving q order within a group.
    std::vector<Observable> order;
    for (const auto& cell : result.cells)
        if (std::find(order.begin(), order.end(), cell.observable) == order.end())
            order.push_back(cell.observable);

    for (Observable obs : order) {
        std::vector<const ObservableCell*> cells;
        for (const auto& cell : result.cells)
            if (cell.observable == obs) cells.push_back(&cell);
        if (cells.empty()) continue;

        const std::filesystem::path file =
            out_dir / (std::string(to_string(obs)) + ".csv");
        std::ofstream out(file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + file.string());
        write_line(out, "# observable=" + std::string(to_string(obs)) + " " +
                            spec_echo(result.spec));
        std::string header = "q,replicas,censored";
        for (const auto& kv : cells.front()->values) header += "," + kv.first;
        write_line(out, header);
        for (const ObservableCell* cell : cells) {
            std::string row = format_number(cell->q) + "," + format_number(cell->replicas) +
                              "," + format_number(cell->censored);
            for (const auto& kv : cell->values) row += "," + format_number(kv.second);
            write_line(out, row);
        }
    }

    std::ofstream summary(out_dir / "summary.txt", std::ios::binary);
    if (!summary) throw std::runtime_error("cannot open output file: summary.txt");
    write_line(summary, "sweep " + spec_echo(result.spec));
    for (const auto& cell : result.cells) {
        std::string line = std::string(to_string(cell.observable)) + " q=" +
                           format_number(cell.q) + " replicas=" + format_number(cell.replicas) +
                           " censored=" + format_number(cell.censored);
        for (const auto& kv : cell.values)
            line += " " + kv.first + "=" + format_number(kv.second);
        write_line(summary, line);
    }
    long failures = 0;
    for (const auto& cell : result.cells) failures += static_cast<long>(cell.failures.size());
    write_line(summary, "replica_failures=" + format_number(failures));
    for (const auto& cell : result.cells)
        for (const auto& f : cell.failures)
            write_line(summary, "failure " + std::string(to_string(cell.observable)) + " " + f);
}

}  // namespace tscp
