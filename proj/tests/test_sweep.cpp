#include "doctest.h"

#include "tscp/sweep.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

using namespace tscp;
namespace fs = std::filesystem;

namespace {

SweepSpec parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

const char* kFullConfig =
    "# every key once\n"
    "q_grid = 0.1, 0.25\n"
    "window_radius = 16\n"
    "horizon = 3.5\n"
    "replicas = 6\n"
    "master_seed = 77\n"
    "boundary = frozen_pair:healthy,infected\n"
    "variant = greedy_infection\n"
    "observables = survival, xi_drift\n"
    "init = product\n"
    "healthy_spacing = 4\n"
    "interval_left = -9\n"
    "product_density = 0.35\n"
    "xi_kappa = 7\n"
    "threads = 2\n";

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        out[entry.path().filename().string()] = buf.str();
    }
    return out;
}

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.q_grid = {0.2, 0.8};
    spec.window_radius = 10;
    spec.horizon = 2.0;
    spec.replicas = 5;
    spec.master_seed = 90210;
    spec.observables = {Observable::Survival, Observable::RightmostDrift,
                        Observable::XiDrift};
    spec.xi_kappa = 4;
    return spec;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("config parser covers every key") {
    SweepSpec spec = parse_text(kFullConfig);
    REQUIRE(spec.q_grid.size() == 2);
    CHECK(spec.q_grid[0] == doctest::Approx(0.1));
    CHECK(spec.q_grid[1] == doctest::Approx(0.25));
    CHECK(spec.window_radius == 16);
    CHECK(spec.horizon == doctest::Approx(3.5));
    CHECK(spec.replicas == 6);
    CHECK(spec.master_seed == 77);
    CHECK(spec.boundary.left == SiteState::Healthy);
    CHECK(spec.boundary.right == SiteState::Infected);
    CHECK(spec.variant == RuleVariant::GreedyInfection);
    REQUIRE(spec.observables.size() == 2);
    CHECK(spec.observables[0] == Observable::Survival);
    CHECK(spec.observables[1] == Observable::XiDrift);
    CHECK(spec.init == InitKind::Product);
    CHECK(spec.healthy_spacing == 4);
    CHECK(spec.interval_left == -9);
    CHECK(spec.product_density == doctest::Approx(0.35));
    CHECK(spec.xi_kappa == 7);
    CHECK(spec.threads == 2);
}

TEST_CASE("config parser fails loudly") {
    bool named_the_key = false;
    try {
        parse_text("q_grid = 0.1\nobservables = survival\nbogus_key = 3\n");
    } catch (const std::invalid_argument& e) {
        named_the_key = std::string(e.what()).find("bogus_key") != std::string::npos;
    }
    CHECK(named_the_key);
    CHECK_THROWS_AS(parse_text("q_grid = 0.1\nq_grid = 0.2\nobservables = survival\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("q_grid = 0.1\nobservables = survival\nreplicas = many\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("observables = survival\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("q_grid = 0.1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("q_grid = 1.5\nobservables = survival\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("q_grid = 0.1\nobservables = survival\nwindow_radius = 3\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("q_grid = 0.1 0.2\nobservables = survival\n"),
                    std::invalid_argument);
}

TEST_CASE("boundary strings parse or reject") {
    CHECK(boundary_from_string("frozen_passive").left == SiteState::Passive);
    CHECK(boundary_from_string("frozen_healthy").right == SiteState::Healthy);
    BoundaryPolicy mixed = boundary_from_string("frozen_pair:passive,healthy");
    CHECK(mixed.left == SiteState::Passive);
    CHECK(mixed.right == SiteState::Healthy);
    CHECK_THROWS_AS(boundary_from_string("open"), std::invalid_argument);
    CHECK_THROWS_AS(boundary_from_string("frozen_pair:passive"), std::invalid_argument);
}

TEST_CASE("initial conditions per kind") {
    SweepSpec spec = tiny_spec();
    spec.window_radius = 12;
    spec.healthy_spacing = 5;

    spec.init = InitKind::SingleInfected;
    Configuration single = build_initial(spec, 1);
    CHECK(single.at(0) == SiteState::Infected);
    for (int x = -12; x <= 12; ++x) {
        if (x == 0) continue;
        const SiteState expect = x % 5 == 0 ? SiteState::Healthy : SiteState::Passive;
        CHECK(single.at(x) == expect);
    }

    spec.init = InitKind::InfectedInterval;
    spec.interval_left = -6;
    Configuration interval = build_initial(spec, 1);
    for (int x = -6; x <= 0; ++x) CHECK(interval.at(x) == SiteState::Infected);
    CHECK(interval.at(-10) == SiteState::Healthy);
    CHECK(interval.at(5) == SiteState::Healthy);
    CHECK(interval.at(2) == SiteState::Passive);

    spec.init = InitKind::Product;
    spec.product_density = 0.5;
    Configuration prod_a = build_initial(spec, 5);
    Configuration prod_b = build_initial(spec, 5);
    Configuration prod_c = build_initial(spec, 6);
    CHECK(prod_a.at(0) == SiteState::Infected);
    bool same_seed_equal = true, diff_seed_equal = true;
    int healthy = 0;
    for (int x = -12; x <= 12; ++x) {
        if (x != 0) CHECK(prod_a.at(x) != SiteState::Infected);
        same_seed_equal = same_seed_equal && prod_a.at(x) == prod_b.at(x);
        diff_seed_equal = diff_seed_equal && prod_a.at(x) == prod_c.at(x);
        if (prod_a.at(x) == SiteState::Healthy) ++healthy;
    }
    CHECK(same_seed_equal);
    CHECK(!diff_seed_equal);
    CHECK(healthy > 3);
}

TEST_CASE("sweeps are reproducible and thread-count independent") {
    SweepSpec spec = tiny_spec();
    SweepResult first = run_sweep(spec);
    SweepResult again = run_sweep(spec);
    SweepSpec threaded = spec;
    threaded.threads = 3;
    SweepResult parallel = run_sweep(threaded);

    REQUIRE(first.cells.size() == spec.q_grid.size() * spec.observables.size());
    REQUIRE(again.cells.size() == first.cells.size());
    REQUIRE(parallel.cells.size() == first.cells.size());
    for (std::size_t i = 0; i < first.cells.size(); ++i) {
        const ObservableCell& a = first.cells[i];
        const ObservableCell& b = again.cells[i];
        const ObservableCell& c = parallel.cells[i];
        CHECK(a.q == b.q);
        CHECK(a.observable == b.observable);
        CHECK(a.replicas == b.replicas);
        CHECK(a.censored == b.censored);
        REQUIRE(a.values.size() == b.values.size());
        REQUIRE(a.values.size() == c.values.size());
        for (std::size_t k = 0; k < a.values.size(); ++k) {
            CHECK(a.values[k].first == b.values[k].first);
            CHECK(a.values[k].second == b.values[k].second);
            CHECK(a.values[k].first == c.values[k].first);
            CHECK(a.values[k].second == c.values[k].second);
        }
        CHECK(a.failures.empty());
    }

    SweepSpec other = spec;
    other.master_seed = 90211;
    SweepResult shifted = run_sweep(other);
    bool any_difference = false;
    for (std::size_t i = 0; i < first.cells.size(); ++i)
        for (std::size_t k = 0; k < first.cells[i].values.size(); ++k)
            if (first.cells[i].values[k].second != shifted.cells[i].values[k].second)
                any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("report emission is a pure function of the result") {
    SweepSpec spec = tiny_spec();
    spec.observables = {Observable::Survival, Observable::RightmostDrift};
    SweepResult result = run_sweep(spec);

    const fs::path base = fs::temp_directory_path() / "tscp-sweep-report-test";
    fs::remove_all(base);
    emit_report(result, base / "a");
    emit_report(result, base / "b");

    auto a = read_dir(base / "a");
    auto b = read_dir(base / "b");
    CHECK(a == b);
    REQUIRE(a.count("survival.csv") == 1);
    REQUIRE(a.count("rightmost_drift.csv") == 1);
    REQUIRE(a.count("summary.txt") == 1);
    const std::string& csv = a["survival.csv"];
    CHECK(csv.rfind("# observable=survival", 0) == 0);
    CHECK(csv.find("q,replicas,censored") != std::string::npos);
    CHECK(csv.find("0.2,") != std::string::npos);
    CHECK(csv.find("0.8,") != std::string::npos);
    CHECK(csv.find("threads") == std::string::npos);
    fs::remove_all(base);
}

}  // TEST_SUITE
