#pragma once

#include "tscp/lattice.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tscp {

enum class Observable : std::uint8_t {
    Survival,
    RightmostDrift,
    IntervalStats,
    XiDrift,
    DiscrepancyDensity,
};
const char* to_string(Observable o);

// Initial conditions for trajectory observables. SingleInfected and
// InfectedInterval both lay periodic healthy sites at `healthy_spacing` into
// the passive background, keeping the nearest-empty-site distance bounded;
// Product draws the background i.i.d. healthy with `product_density`. All
// three put an infected site (or interval) around the origin.
enum class InitKind : std::uint8_t { SingleInfected, InfectedInterval, Product };
const char* to_string(InitKind k);

struct SweepSpec {
    std::vector<double> q_grid;
    int window_radius = 200;
    double horizon = 100.0;
    long replicas = 200;
    std::uint64_t master_seed = 1;
    BoundaryPolicy boundary = BoundaryPolicy::frozen_passive();
    RuleVariant variant = RuleVariant::Standard;
    std::vector<Observable> observables;
    InitKind init = InitKind::SingleInfected;
    int healthy_spacing = 5;
    int interval_left = -150;
    double product_density = 0.5;
    int xi_kappa = 10;
    unsigned threads = 1;
};

// Flat key=value text; '#' starts a comment, blank lines ignored, unknown or
// malformed keys throw with the offending key named. Long sweeps must fail
// loudly at parse time, not quietly mid-run.
SweepSpec parse_config(std::istream& in);
SweepSpec parse_config_file(const std::filesystem::path& path);

struct ObservableCell {
    double q = 0;
    std::size_t q_index = 0;
    Observable observable = Observable::Survival;
    long replicas = 0;  // usable replicas behind the estimates
    long censored = 0;  // edge-truncated or failed replicas
    std::vector<std::pair<std::string, double>> values;  // named columns, stable order
    std::vector<std::string> failures;                   // per-replica error reports
};

struct SweepResult {
    SweepSpec spec;
    std::vector<ObservableCell> cells;
};

// Deterministic in spec.master_seed: replica streams derive from
// (master_seed, q_index, replica_index), results aggregate in replica-index
// order, so thread count and scheduling never change a byte of output.
// Per-replica failures are recorded in the cell and do not abort the sweep.
SweepResult run_sweep(const SweepSpec& spec);

// One CSV per observable plus a human-readable summary.txt. Pure function of
// `result`: re-emission writes byte-identical files.
void emit_report(const SweepResult& result, const std::filesystem::path& out_dir);

// Builds the initial configuration a trajectory replica starts from.
Configuration build_initial(const SweepSpec& spec, std::uint64_t replica_seed);

// "frozen_passive", "frozen_healthy" or "frozen_pair:<state>,<state>".
BoundaryPolicy boundary_from_string(const std::string& text);

}  // namespace tscp
