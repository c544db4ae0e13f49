#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tscp {

using Rational = boost::multiprecision::cpp_rational;

// Parse a decimal literal ("0.05", "1", ".2", "-0.125") into an exact
// rational. The identity checks are algebraic, so grid points must enter the
// computation exactly as written, not as binary doubles.
Rational rational_from_decimal(std::string_view text);

double to_double(const Rational& r);

std::string to_decimal_string(const Rational& r, int significant_digits = 12);

// Dense Gaussian elimination with partial (nonzero) pivoting over the
// rationals. Solves A x = b; throws std::domain_error on a singular system.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a,
                                   std::vector<Rational> b);

}  // namespace tscp
