#include "tscp/csv.hpp"

#include <charconv>
#include <ostream>
#include <system_error>

namespace tscp {

std::string format_number(double value, int significant_digits) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                      std::chars_format::general, significant_digits);
    if (result.ec != std::errc()) return "nan";
    return std::string(buffer, result.ptr);
}

std::string format_number(long long value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string format_number(unsigned long long value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_line(std::ostream& out, const std::string& line) {
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.put('\n');
}

}  // namespace tscp
