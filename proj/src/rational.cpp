#include "tscp/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cctype>
#include <sstream>

namespace tscp {

Rational rational_from_decimal(std::string_view text) {
    using Int = boost::multiprecision::cpp_int;
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    Int numerator = 0;
    Int denominator = 1;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_point) throw std::invalid_argument("rational_from_decimal: second '.' in \"" + std::string(text) + "\"");
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("rational_from_decimal: bad character in \"" + std::string(text) + "\"");
        numerator = numerator * 10 + (c - '0');
        if (seen_point) denominator *= 10;
        any_digit = true;
    }
    if (!any_digit) throw std::invalid_argument("rational_from_decimal: no digits in \"" + std::string(text) + "\"");
    Rational r(numerator, denominator);
    return negative ? Rational(-r) : r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_decimal_string(const Rational& r, int significant_digits) {
    using BigFloat = boost::multiprecision::cpp_bin_float_50;
    BigFloat value(r);
    std::ostringstream out;
    out.precision(significant_digits);
    out << value;
    return out.str();
}

std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a,
                                   std::vector<Rational> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("solve_linear: non-square matrix");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::domain_error("solve_linear: singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            if (a[row][col] == 0) continue;
            Rational factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t row = n; row-- > 0;) {
        Rational acc = b[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

}  // namespace tscp
