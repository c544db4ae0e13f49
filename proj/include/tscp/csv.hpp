#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace tscp {

// Decimal text with 12 significant digits, locale-independent, identical
// across runs and platforms; the determinism contract for emitted files
// hinges on this single formatting routine.
std::string format_number(double value, int significant_digits = 12);

std::string format_number(long long value);
inline std::string format_number(int value) { return format_number(static_cast<long long>(value)); }
inline std::string format_number(long value) { return format_number(static_cast<long long>(value)); }
std::string format_number(unsigned long long value);
inline std::string format_number(std::size_t value) {
    return format_number(static_cast<unsigned long long>(value));
}

// Writes lines with LF endings regardless of platform: open streams in
// binary mode and pass them through here.
void write_line(std::ostream& out, const std::string& line);

}  // namespace tscp
