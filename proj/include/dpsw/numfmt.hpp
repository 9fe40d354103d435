#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace dpsw {

/// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

/// Fixed-point form with the given precision, locale-independent.
inline std::string format_fixed(double value, int precision) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                                   precision);
    if (ec != std::errc{})
        throw std::invalid_argument("format_fixed: value does not fit");
    return std::string(buf, ptr);
}

/// Parses a full token as a double; returns false if the token is not a
/// complete, valid number.
inline bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace dpsw
