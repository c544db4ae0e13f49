#include "CLI11.hpp"

#include "tscp/boundary_tracker.hpp"
#include "tscp/csv.hpp"
#include "tscp/fa1f.hpp"
#include "tscp/rational.hpp"
#include "tscp/rng.hpp"
#include "tscp/simulate.hpp"
#include "tscp/stats.hpp"
#include "tscp/sweep.hpp"
#include "tscp/trajectory.hpp"
#include "tscp/verify.hpp"
#include "tscp/ychain.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct SimulateArgs {
    double q = 0.5;
    int radius = 50;
    double horizon = 20.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string boundary = "frozen_passive";
    std::string variant = "standard";
    std::string init = "single_infected";
    int spacing = 5;
    int interval_left = -20;
    double product_density = 0.5;
    bool export_windows = false;
};

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

int run_simulate(const SimulateArgs& args) {
    tscp::SweepSpec spec;
    spec.q_grid = {args.q};
    spec.window_radius = args.radius;
    spec.horizon = args.horizon;
    spec.boundary = tscp::boundary_from_string(args.boundary);
    spec.variant = args.variant == "greedy_infection" ? tscp::RuleVariant::GreedyInfection
                                                      : tscp::RuleVariant::Standard;
    spec.init = args.init == "infected_interval" ? tscp::InitKind::InfectedInterval
                : args.init == "product"         ? tscp::InitKind::Product
                                                 : tscp::InitKind::SingleInfected;
    spec.healthy_spacing = args.spacing;
    spec.interval_left = args.interval_left;
    spec.product_density = args.product_density;
    spec.observables = {tscp::Observable::Survival};

    const tscp::Configuration initial = tscp::build_initial(spec, args.seed);
    const tscp::DynamicsParams params{args.q, spec.variant};
    const tscp::Trajectory traj = tscp::simulate(initial, params, args.horizon, args.seed);

    fs::create_directories(args.out);
    {
        auto out = open_out(fs::path(args.out) / "events.csv");
        tscp::write_events_csv(out, traj);
    }
    const tscp::Configuration final_config = tscp::snapshot_at(traj, args.horizon);
    {
        auto out = open_out(fs::path(args.out) / "snapshot.csv");
        tscp::write_snapshot_csv(out, traj, final_config, args.horizon);
    }

    if (args.export_windows) {
        const tscp::StableWindowList windows = tscp::stable_windows(traj);
        auto wout = open_out(fs::path(args.out) / "windows.csv");
        tscp::write_line(wout, "start,end,reason,level,z2,z3,z4,z5,level_delta");
        for (const auto& w : windows.windows) {
            std::string row = tscp::format_number(w.start) + "," + tscp::format_number(w.end) +
                              "," + tscp::to_string(w.reason) + "," +
                              tscp::format_number(w.initial_x.level);
            for (int b = 0; b < 4; ++b)
                row += "," + tscp::format_number(static_cast<long long>(w.initial_x.bits[b]));
            row += "," + tscp::format_number(static_cast<long long>(w.level_delta));
            tscp::write_line(wout, row);
        }

        const tscp::EmbeddedChain chain = tscp::embedded_chain(traj);
        const tscp::LevelChanges changes = tscp::level_changes(chain.states);
        const tscp::IntervalStats stats = tscp::interval_decomposition(changes, chain.states);
        auto iout = open_out(fs::path(args.out) / "intervals.csv");
        tscp::write_line(iout, "index,length,sign,start_good,start_bad");
        for (std::size_t i = 0; i < stats.intervals.size(); ++i) {
            const auto& s = stats.intervals[i];
            tscp::write_line(iout, tscp::format_number(static_cast<long long>(i)) + "," +
                                       tscp::format_number(s.length) + "," +
                                       tscp::format_number(static_cast<long long>(s.sign)) + "," +
                                       (s.start_good ? "1" : "0") + "," +
                                       (s.start_bad ? "1" : "0"));
        }
    }

    const tscp::InfectedInterval iv = tscp::infected_interval(final_config);
    std::cout << "events=" << traj.events.size() << " window=[" << -args.radius << ","
              << args.radius << "] boundary=" << spec.boundary.label() << "\n";
    if (iv.empty)
        std::cout << "final: extinct\n";
    else
        std::cout << "final: infected interval [" << iv.lo << "," << iv.hi << "]"
                  << (iv.connected ? "" : " (DISCONNECTED)") << "\n";
    std::cout << "wrote " << args.out << "/events.csv, snapshot.csv"
              << (args.export_windows ? ", windows.csv, intervals.csv" : "") << "\n";
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_dir,
                  std::uint64_t seed_override, bool has_seed, unsigned threads_override,
                  bool has_threads) {
    tscp::SweepSpec spec = tscp::parse_config_file(config_path);
    if (has_seed) spec.master_seed = seed_override;
    if (has_threads) spec.threads = threads_override;
    const tscp::SweepResult result = tscp::run_sweep(spec);
    tscp::emit_report(result, out_dir);
    long failures = 0;
    for (const auto& cell : result.cells) failures += static_cast<long>(cell.failures.size());
    std::cout << "sweep complete: " << result.cells.size() << " cells, " << failures
              << " replica failures, report in " << out_dir << "\n";
    return failures == 0 ? 0 : 1;
}

int run_ychain(const std::string& grid_csv, const std::string& out_dir) {
    std::vector<tscp::Rational> grid;
    std::stringstream ss(grid_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) grid.push_back(tscp::rational_from_decimal(item));
    }
    if (grid.empty()) throw std::runtime_error("empty q grid");
    fs::create_directories(out_dir);
    const fs::path file = fs::path(out_dir) / "ychain_report.csv";
    auto out = open_out(file);
    tscp::write_ychain_report(out, grid);
    std::cout << "wrote " << file.string() << " (" << grid.size() << " grid points)\n";
    return 0;
}

int run_verify(const std::string& suite, unsigned threads, bool quick) {
    auto dispatch = [&](const std::string& name) -> tscp::SuiteResult {
        if (name == "ychain") return tscp::verify_ychain(quick ? 20000 : 100000);
        if (name == "coupling") return tscp::verify_coupling(quick ? 1500 : 10000);
        if (name == "largeq")
            return tscp::verify_largeq(quick ? 40 : 200, quick ? 100 : 200, quick ? 120 : 200,
                                       threads);
        if (name == "fa1f") return tscp::verify_fa1f(quick ? 120 : 500, quick ? 800 : 4000, threads);
        if (name == "invariants")
            return tscp::verify_invariants(quick ? 200 : 1000, quick ? 200 : 1000,
                                           quick ? 100 : 500, threads);
        if (name == "phase")
            return tscp::verify_phase_diagram(quick ? 60 : 200, quick ? 80 : 200,
                                              quick ? 60 : 100, threads);
        if (name == "determinism")
            return tscp::verify_determinism(fs::temp_directory_path() / "tscp-determinism");
        throw CLI::ValidationError("suite", "unknown suite: " + name);
    };

    if (suite == "all") {
        bool ok = true;
        for (const char* name :
             {"ychain", "coupling", "largeq", "fa1f", "invariants", "phase", "determinism"})
            ok = tscp::print_suite(std::cout, dispatch(name)) && ok;
        return ok ? 0 : 1;
    }
    return tscp::print_suite(std::cout, dispatch(suite)) ? 0 : 1;
}

int run_fa1f(const std::string& mode, double q, int kappa, int radius, double horizon,
             long replicas, std::uint64_t seed, const std::string& out_dir) {
    if (mode == "xi") {
        const std::vector<double> times = {horizon / 8, horizon / 4, horizon / 2, horizon};
        const tscp::XiCurve curve =
            tscp::xi_drift_experiment(kappa, q, times, replicas, seed);
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            file = open_out(fs::path(out_dir) / "xi_curve.csv");
            out = &file;
        }
        tscp::write_line(*out, "t,mean_xi,se,drift_line,bound_applies");
        for (std::size_t i = 0; i < curve.times.size(); ++i)
            tscp::write_line(*out, tscp::format_number(curve.times[i]) + "," +
                                       tscp::format_number(curve.mean[i]) + "," +
                                       tscp::format_number(curve.se[i]) + "," +
                                       tscp::format_number(curve.bound[i]) + "," +
                                       (curve.bound_applies ? "1" : "0"));
        return 0;
    }
    if (mode == "wald") {
        tscp::RunningStat disp;
        long down = 0, steps = 0;
        std::vector<long> changes;
        for (long i = 0; i < replicas; ++i) {
            const tscp::XiProcess run = tscp::simplified_boundary_process(
                1000.0, q, horizon, tscp::derive_seed(seed, static_cast<std::uint64_t>(i)));
            disp.add(run.final_xi - run.xi0);
            for (const auto& m : run.moves)
                if (m.step < 0) ++down;
            steps += run.position_changes;
            changes.push_back(run.position_changes);
        }
        const double expected = horizon * (1.0 - 2.0 * q);
        const double p_step = tscp::binomial_test_pvalue(down, steps, q);
        const tscp::GofResult gof = tscp::poisson_gof(changes, horizon);
        std::cout << "mean_displacement=" << tscp::format_number(disp.mean())
                  << " expected=" << tscp::format_number(expected)
                  << " se=" << tscp::format_number(disp.se()) << "\n"
                  << "down_steps=" << down << "/" << steps
                  << " binomial_p=" << tscp::format_number(p_step) << "\n"
                  << "rate_chi2=" << tscp::format_number(gof.statistic)
                  << " p=" << tscp::format_number(gof.p_value) << "\n";
        const bool ok = std::abs(disp.mean() - expected) <= 3.0 * disp.se() && p_step >= 0.01;
        return ok ? 0 : 1;
    }
    if (mode == "coupling") {
        const tscp::FA1fConfig eta0 =
            tscp::sample_product_measure(-radius, radius, q, tscp::derive_seed(seed, 1));
        const tscp::FA1fConfig tilde0 =
            tscp::sample_product_measure(-radius, radius, q, tscp::derive_seed(seed, 2));
        std::vector<double> times;
        for (int k = 1; k <= 10; ++k) times.push_back(horizon * k / 10.0);
        const tscp::FourStateRun run =
            tscp::couple_two_copies(eta0, tilde0, q, horizon, seed, times);
        std::cout << "t,discrepancies\n";
        for (std::size_t i = 0; i < run.sample_times.size(); ++i)
            std::cout << tscp::format_number(run.sample_times[i]) << ","
                      << run.discrepancy_counts[i] << "\n";
        std::cout << "events=" << run.events
                  << " final_discrepancies=" << run.final_discrepancies << " absorption="
                  << (run.absorption_violated ? "VIOLATED" : "ok") << "\n";
        return run.absorption_violated ? 1 : 0;
    }
    throw CLI::ValidationError("mode", "unknown mode: " + mode);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification laboratory for a three-state contact process on Z"};
    app.require_subcommand(1);

    // simulate
    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one trajectory and export CSVs");
    simulate->add_option("--q", sim.q, "Healing weight in (0,1)")->required();
    simulate->add_option("--radius", sim.radius, "Window radius (sites [-r, r])");
    simulate->add_option("--horizon", sim.horizon, "Time horizon");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--out", sim.out, "Output directory")->required();
    simulate->add_option("--boundary", sim.boundary,
                         "frozen_passive | frozen_healthy | frozen_pair:<l>,<r>");
    simulate->add_option("--variant", sim.variant, "standard | greedy_infection")
        ->check(CLI::IsMember({"standard", "greedy_infection"}));
    simulate->add_option("--init", sim.init, "single_infected | infected_interval | product")
        ->check(CLI::IsMember({"single_infected", "infected_interval", "product"}));
    simulate->add_option("--spacing", sim.spacing, "Healthy-site spacing for periodic inits");
    simulate->add_option("--interval-left", sim.interval_left,
                         "Left edge of the infected interval init");
    simulate->add_option("--product-density", sim.product_density,
                         "Healthy density for the product init");
    simulate->add_flag("--export-windows", sim.export_windows,
                       "Also export stable windows and interval decomposition");

    // sweep
    std::string sweep_config, sweep_out = "sweep_out";
    std::uint64_t sweep_seed = 0;
    unsigned sweep_threads = 0;
    auto* sweep = app.add_subcommand("sweep", "Run a replica sweep from a config file");
    sweep->add_option("--config", sweep_config, "key = value config file")->required();
    auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "Override master_seed");
    sweep->add_option("--out", sweep_out, "Output directory");
    auto* sweep_threads_opt = sweep->add_option("--threads", sweep_threads, "Override threads");

    // ychain
    std::string ychain_grid = "0.001,0.005,0.01,0.02,0.05,0.1,0.15,0.2";
    std::string ychain_out = ".";
    auto* ychain = app.add_subcommand("ychain", "Exact chain report over a q grid");
    ychain->add_option("--grid", ychain_grid, "Comma-separated decimal q values");
    ychain->add_option("--out", ychain_out, "Output directory");

    // verify
    std::string verify_suite;
    unsigned verify_threads = 1;
    bool verify_quick = false;
    auto* verify = app.add_subcommand("verify", "Run a verification suite (exit 0 iff pass)");
    verify
        ->add_option("suite", verify_suite,
                     "ychain | coupling | largeq | fa1f | invariants | phase | determinism | all")
        ->required();
    verify->add_option("--threads", verify_threads, "Worker threads for replica loops");
    verify->add_flag("--quick", verify_quick, "Reduced sizes for smoke testing");

    // fa1f
    std::string fa1f_mode = "xi", fa1f_out;
    double fa1f_q = 0.75, fa1f_horizon = 16.0;
    int fa1f_kappa = 10, fa1f_radius = 100;
    long fa1f_replicas = 500;
    std::uint64_t fa1f_seed = 1;
    auto* fa1f = app.add_subcommand("fa1f", "Constrained binary dynamics experiments");
    fa1f->add_option("--mode", fa1f_mode, "xi | wald | coupling")
        ->check(CLI::IsMember({"xi", "wald", "coupling"}));
    fa1f->add_option("--q", fa1f_q, "Empty-site weight in (0,1)");
    fa1f->add_option("--kappa", fa1f_kappa, "Initial distance to the empty site (xi mode)");
    fa1f->add_option("--radius", fa1f_radius, "Window radius (coupling mode)");
    fa1f->add_option("--horizon", fa1f_horizon, "Time horizon");
    fa1f->add_option("--replicas", fa1f_replicas, "Replica count");
    fa1f->add_option("--seed", fa1f_seed, "Random seed");
    fa1f->add_option("--out", fa1f_out, "Output directory (xi mode)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (sweep->parsed())
            return run_sweep_cmd(sweep_config, sweep_out, sweep_seed, sweep_seed_opt->count() > 0,
                                 sweep_threads, sweep_threads_opt->count() > 0);
        if (ychain->parsed()) return run_ychain(ychain_grid, ychain_out);
        if (verify->parsed()) return run_verify(verify_suite, verify_threads, verify_quick);
        if (fa1f->parsed())
            return run_fa1f(fa1f_mode, fa1f_q, fa1f_kappa, fa1f_radius, fa1f_horizon,
                            fa1f_replicas, fa1f_seed, fa1f_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
