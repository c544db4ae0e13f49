#include "doctest.h"

#include "tscp/rational.hpp"

#include <stdexcept>

using namespace tscp;

TEST_SUITE("rational") {

TEST_CASE("decimal parsing is exact") {
    CHECK(rational_from_decimal("0.05") == Rational(1, 20));
    CHECK(rational_from_decimal("1") == Rational(1));
    CHECK(rational_from_decimal(".2") == Rational(1, 5));
    CHECK(rational_from_decimal("-0.125") == Rational(-1, 8));
    CHECK(rational_from_decimal("0.001") == Rational(1, 1000));
    CHECK(rational_from_decimal("0.9") == Rational(9, 10));
    CHECK(rational_from_decimal("2.5") == Rational(5, 2));
}

TEST_CASE("malformed decimals are rejected") {
    CHECK_THROWS_AS(rational_from_decimal(""), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_decimal("abc"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_decimal("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_decimal("1e-3"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_decimal("."), std::invalid_argument);
}

TEST_CASE("decimal rendering") {
    CHECK(to_decimal_string(Rational(1, 2)) == "0.5");
    CHECK(to_decimal_string(Rational(1, 3), 6) == "0.333333");
    CHECK(to_double(Rational(1, 4)) == 0.25);
}

TEST_CASE("linear solve on a known system") {
    // 2x + y = 5, x - y = 1  ->  x = 2, y = 1
    std::vector<std::vector<Rational>> a = {{2, 1}, {1, -1}};
    std::vector<Rational> b = {5, 1};
    auto x = solve_linear(a, b);
    CHECK(x[0] == Rational(2));
    CHECK(x[1] == Rational(1));
}

TEST_CASE("singular systems throw") {
    std::vector<std::vector<Rational>> a = {{1, 2}, {2, 4}};
    std::vector<Rational> b = {1, 2};
    CHECK_THROWS_AS(solve_linear(a, b), std::domain_error);
}

TEST_CASE("geometric partial sums match the closed form") {
    const Rational a(1, 4);
    Rational sum = 0, power = 1;
    for (int k = 0; k <= 30; ++k) {
        sum += power;
        power *= a;
    }
    CHECK(sum == (1 - power) / (1 - a));  // power is a^31 here
}

}  // TEST_SUITE
