#include "doctest.h"

#include "tscp/csv.hpp"
#include "tscp/rng.hpp"
#include "tscp/simulate.hpp"
#include "tscp/trajectory.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace tscp;

namespace {

Configuration small_start() {
    Configuration c(-10, 10, SiteState::Passive, BoundaryPolicy::frozen_passive());
    for (int x = -10; x <= 10; x += 4) c.set(x, SiteState::Healthy);
    c.set(1, SiteState::Infected);
    return c;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("same seed, same trajectory") {
    const DynamicsParams params{0.3, RuleVariant::Standard};
    Trajectory a = simulate(small_start(), params, 6.0, 991);
    Trajectory b = simulate(small_start(), params, 6.0, 991);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].site == b.events[i].site);
        CHECK(a.events[i].draw == b.events[i].draw);
        CHECK(a.events[i].new_state == b.events[i].new_state);
    }
    Trajectory c = simulate(small_start(), params, 6.0, 992);
    REQUIRE(!c.events.empty());
    CHECK(a.events.front().time != c.events.front().time);
}

TEST_CASE("events are time-ordered, in-window, with draws in [0,1)") {
    Trajectory traj = simulate(small_start(), DynamicsParams{0.5, RuleVariant::Standard}, 8.0, 5);
    REQUIRE(!traj.events.empty());
    double last = 0.0;
    for (const Event& e : traj.events) {
        CHECK(e.time > last);
        last = e.time;
        CHECK(e.time <= 8.0);
        CHECK(e.site >= -10);
        CHECK(e.site <= 10);
        CHECK(e.draw >= 0.0);
        CHECK(e.draw < 1.0);
    }
}

TEST_CASE("event counts track the unit-rate clocks") {
    // 201 sites over horizon 12: mean 2412 events, sd ~ 49; 5 sigma window.
    Configuration c(-100, 100, SiteState::Passive, BoundaryPolicy::frozen_passive());
    Trajectory traj = simulate(c, DynamicsParams{0.5, RuleVariant::Standard}, 12.0, 31337);
    const double mean = 201 * 12.0;
    CHECK(std::abs(static_cast<double>(traj.events.size()) - mean) < 5 * std::sqrt(mean));
}

TEST_CASE("replay and snapshot agree") {
    Trajectory traj = simulate(small_start(), DynamicsParams{0.4, RuleVariant::Standard}, 5.0, 77);
    Replay replay(traj);
    while (!replay.done()) replay.step();
    Configuration direct = snapshot_at(traj, 5.0);
    CHECK(replay.config() == direct);

    // A mid-trajectory snapshot equals replaying up to that time.
    const double t_mid = traj.events[traj.events.size() / 2].time;
    Replay partial(traj);
    while (!partial.done() && partial.peek().time <= t_mid) partial.step();
    CHECK(snapshot_at(traj, t_mid) == partial.config());
}

TEST_CASE("identical initial states stay coupled forever") {
    Configuration c = small_start();
    auto [a, b] = run_coupled_pair(c, c, DynamicsParams{0.35, RuleVariant::Standard}, 6.0, 4242);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i)
        CHECK(a.events[i].new_state == b.events[i].new_state);
}

TEST_CASE("coupled runs demand matching windows") {
    Configuration a(-5, 5, SiteState::Passive, BoundaryPolicy::frozen_passive());
    Configuration b(-6, 5, SiteState::Passive, BoundaryPolicy::frozen_passive());
    CHECK_THROWS_AS(
        run_coupled_pair(a, b, DynamicsParams{0.5, RuleVariant::Standard}, 1.0, 1),
        std::domain_error);
}

TEST_CASE("simulate_until stops at the requested predicate") {
    Trajectory traj = simulate_until(
        small_start(), DynamicsParams{0.5, RuleVariant::Standard}, 100.0, 8,
        [](const Configuration&, const Event&) { return true; });
    CHECK(traj.events.size() == 1);
    CHECK(traj.horizon == 100.0);
}

TEST_CASE("horizon must be positive") {
    CHECK_THROWS_AS(simulate(small_start(), DynamicsParams{0.5, RuleVariant::Standard}, 0.0, 1),
                    std::domain_error);
}

TEST_CASE("event export carries the run parameters in the header") {
    Trajectory traj = simulate(small_start(), DynamicsParams{0.25, RuleVariant::Standard}, 2.0, 3);
    std::ostringstream out;
    write_events_csv(out, traj);
    std::istringstream in(out.str());
    std::string header, columns, first_row;
    std::getline(in, header);
    std::getline(in, columns);
    std::getline(in, first_row);
    CHECK(header.find("q=") != std::string::npos);
    CHECK(header.find("seed=") != std::string::npos);
    CHECK(header.find("window=[") != std::string::npos);
    CHECK(header.find("boundary=frozen_passive") != std::string::npos);
    CHECK(header.find("variant=standard") != std::string::npos);
    CHECK(columns == "time,site,draw,new_state");
    CHECK(!first_row.empty());
}

TEST_CASE("number formatting is stable") {
    CHECK(format_number(0.05) == "0.05");
    CHECK(format_number(static_cast<long long>(42)) == "42");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(123456789012345.0).size() >= 12);
}

}  // TEST_SUITE
