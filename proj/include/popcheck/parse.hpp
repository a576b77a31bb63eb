#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "popcheck/error.hpp"

namespace popcheck {

/// Strict decimal parse; the whole token must be consumed. Accepts inf/-inf.
inline double parse_number(std::string_view token) {
    std::string_view s = token;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (s.empty() || ec != std::errc{} || ptr != last) {
        throw RegistryError("malformed number '" + std::string(token) + "'");
    }
    return value;
}

/// Shortest round-trip decimal form.
inline std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

/// Splits `name[:param[:param...]]` into its colon-separated fields.
inline std::vector<std::string> split_registry(std::string_view spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = spec.find(':', start);
        parts.emplace_back(spec.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline std::vector<double> parse_params(const std::vector<std::string>& parts) {
    std::vector<double> out;
    for (std::size_t i = 1; i < parts.size(); ++i) out.push_back(parse_number(parts[i]));
    return out;
}

inline void expect_param_count(const std::string& name, const std::vector<double>& params,
                               std::size_t n) {
    if (params.size() != n) {
        throw RegistryError("'" + name + "' expects " + std::to_string(n) + " parameter(s), got " +
                            std::to_string(params.size()));
    }
}

} // namespace popcheck
