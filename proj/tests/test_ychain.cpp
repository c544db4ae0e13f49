#include "doctest.h"

#include "tscp/rational.hpp"
#include "tscp/rng.hpp"
#include "tscp/verify.hpp"
#include "tscp/ychain.hpp"

#include <cmath>
#include <sstream>
#include <vector>

using namespace tscp;

using BigInt = boost::multiprecision::cpp_int;

TEST_SUITE("ychain") {

TEST_CASE("cycle weights match their closed forms") {
    for (int num = 1; num < 20; ++num) {
        const Rational q(num, 20);
        CHECK(cycle_weight_a(q) == (1 - q) / (2 * (3 - q)));
        CHECK(cycle_weight_b(q) == (1 - q) / (2 * (2 - q)));
        CHECK(cycle_weight_a(q) + cycle_weight_b(q) < 1);
    }
}

TEST_CASE("kernel edge probabilities at q = 1/4") {
    const Rational q(1, 4);
    YKernel kernel = build_y_kernel(q);

    // From (0,0,0): self-loop-free mass (4-3q)/4; heal edges go down.
    const Rational n000 = 4 - 3 * q;
    CHECK(edge_probability(kernel, y_pattern(0, 0, 0), -1, y_pattern(0, 0, 0)) == q / n000);
    CHECK(edge_probability(kernel, y_pattern(0, 0, 0), -1, y_pattern(1, 0, 0)) == (1 - q) / n000);
    CHECK(edge_probability(kernel, y_pattern(0, 0, 0), 0, y_pattern(0, 1, 0)) == (1 - q) / n000);

    // From (1,1,0): progress with probability 1/2, always landing (1,0,1).
    CHECK(edge_probability(kernel, y_pattern(1, 1, 0), +1, y_pattern(1, 0, 1)) == Rational(1, 2));
    CHECK(edge_probability(kernel, y_pattern(1, 1, 0), 0, y_pattern(1, 0, 0)) == Rational(1, 2));

    // From (1,1,1): every ring that does anything advances the level.
    CHECK(edge_probability(kernel, y_pattern(1, 1, 1), +1, y_pattern(1, 0, 1)) == Rational(1));

    // From (1,0,1): the two 2-cycle returns, each 1/2.
    CHECK(edge_probability(kernel, y_pattern(1, 0, 1), 0, y_pattern(0, 0, 1)) == Rational(1, 2));
    CHECK(edge_probability(kernel, y_pattern(1, 0, 1), 0, y_pattern(1, 0, 0)) == Rational(1, 2));
}

TEST_CASE("progress edges record their raw landing before canonicalization") {
    YKernel kernel = build_y_kernel(Rational(1, 10));
    REQUIRE(kernel.raw_up_landing[y_pattern(1, 1, 0)].has_value());
    CHECK(*kernel.raw_up_landing[y_pattern(1, 1, 0)] == y_pattern(1, 0, 1));
    CHECK(*kernel.raw_up_landing[y_pattern(0, 1, 1)] == y_pattern(1, 1, 1));
    CHECK(*kernel.raw_up_landing[y_pattern(1, 1, 1)] == y_pattern(1, 1, 1));
    CHECK(!kernel.raw_up_landing[y_pattern(1, 0, 0)].has_value());
}

TEST_CASE("first passage at q = 1/100 matches the exact references") {
    YKernel kernel = build_y_kernel(Rational(1, 100));
    FirstPassageResult fp = first_passage_exact(kernel);
    CHECK(fp.theta1() == Rational(BigInt("11776723711"), BigInt("14171654210")));
    CHECK(fp.theta2() == Rational(BigInt("4690896606"), BigInt("7085827105")));
    CHECK(fp.theta3() == Rational(BigInt("7028484111"), BigInt("14171654210")));
    CHECK(kappa_exact(kernel) == Rational(BigInt("2347388901"), BigInt("7085827105")));

    CHECK(std::abs(to_double(fp.mean_steps[y_pattern(1, 1, 0)]) - 3.7722421863932847) < 1e-12);
    CHECK(std::abs(to_double(fp.mean_steps[y_pattern(1, 0, 0)]) - 5.544484372786569) < 1e-12);
    CHECK(std::abs(to_double(fp.mean_steps[y_pattern(1, 0, 1)]) - 5.328163215742194) < 1e-12);

    TwoLevelExact two = two_level_exact(kernel, kGood101);
    CHECK(two.p_plus2 == Rational(BigInt("49399588898579460321"),
                                  BigInt("200835783047810724100")));
    CHECK(std::abs(to_double(two.drift) - 0.0932739807411) < 1e-10);
    TwoLevelExact two100 = two_level_exact(kernel, kGood100);
    CHECK(std::abs(to_double(two100.drift) - 0.3893277073712) < 1e-10);
}

TEST_CASE("theta identities hold at an arbitrary rational point") {
    YKernel kernel = build_y_kernel(Rational(1, 7));
    FirstPassageResult fp = first_passage_exact(kernel);
    CHECK(fp.theta1() == (1 + fp.theta2()) / 2);
    // From the all-passive pattern every effective ring advances: one step.
    CHECK(fp.mean_steps[y_pattern(1, 1, 1)] == Rational(1));
    CHECK(fp.exit_up[y_pattern(1, 1, 1)] > fp.exit_up[y_pattern(1, 0, 1)]);
}

TEST_CASE("printed bound formulas are the stated rational functions") {
    const Rational q(1, 10);
    CHECK(theta1_lower_bound(q) ==
          (15 - 9 * q + 3 * q * q - q * q * q) / (18 - 2 * q * q));
    CHECK(theta2_lower_bound(q) == (6 - 9 * q + 4 * q * q - q * q * q) / (9 - q * q));
    CHECK(theta3_lower_bound(q) == (3 - 4 * q + q * q) / (6 + 2 * q));
    CHECK(one_minus_theta3_lower_bound(q) == (6 - 5 * q + q * q) / (14 - 6 * q));
    CHECK(kappa_lower_bound(q) == (2 - 3 * q + q * q) / (7 - 3 * q));
}

TEST_CASE("identity report is clean on the passive boundary") {
    YKernel kernel = build_y_kernel(Rational(1, 100));
    for (const auto& check : y_identity_report(kernel)) {
        INFO(check.name);
        CHECK(check.pass);
    }
}

TEST_CASE("healthy virtual boundary passes construction but fails the theta identity") {
    const Rational q(1, 100);
    YKernel kernel = build_y_kernel(q, YVirtualBoundary::Healthy, true);  // no throw
    FirstPassageResult fp = first_passage_exact(kernel);
    CHECK(fp.theta1() != (1 + fp.theta2()) / 2);
    CHECK(std::abs(to_double(fp.theta1()) - to_double((1 + fp.theta2()) / 2)) > 1e-3);
}

TEST_CASE("two-level Monte Carlo tracks the exact drift") {
    const Rational q(1, 5);
    YKernel kernel = build_y_kernel(q);
    TwoLevelExact exact = two_level_exact(kernel, kGood101);
    TwoLevelMonteCarlo mc = two_level_monte_carlo(kernel, kGood101, 20000, 777);
    CHECK(mc.censored == 0);
    CHECK(mc.episodes == 20000);
    CHECK(std::abs(mc.drift - to_double(exact.drift)) <= 4 * mc.drift_se);
    CHECK(std::abs(mc.p_plus2 + mc.p_zero + mc.p_minus2 - 1.0) < 1e-12);
}

TEST_CASE("sampling the kernel respects an exact edge probability") {
    const Rational q(3, 10);
    YKernel kernel = build_y_kernel(q);
    SplitMix64 rng(2024);
    const YState start{0, y_pattern(1, 1, 0)};
    long ups = 0;
    const long n = 20000;
    for (long i = 0; i < n; ++i) {
        YState next = y_step(start, kernel, rng);
        if (next.level == 1) ++ups;
    }
    // Exact edge probability 1/2; binomial sd ~ 0.0035.
    CHECK(std::abs(static_cast<double>(ups) / n - 0.5) < 0.02);
}

TEST_CASE("chain report emits one row per grid point with pass flags") {
    std::ostringstream out;
    write_ychain_report(out, {Rational(1, 100), Rational(1, 10)});
    std::istringstream in(out.str());
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header.rfind("q,a,b,theta1,theta2,theta3,kappa,drift,pass_", 0) == 0);
    CHECK(row1.substr(0, row1.find(',')) == "0.01");
    // Identity flags trail the numeric columns; all should read 1 here.
    const auto fields = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(item);
        return out;
    };
    const auto hf = fields(header);
    const auto rf = fields(row1);
    REQUIRE(hf.size() == rf.size());
    for (std::size_t i = 8; i < rf.size(); ++i) {
        INFO(hf[i]);
        CHECK(rf[i] == "1");
    }
    CHECK(!row2.empty());
}

}  // TEST_SUITE
