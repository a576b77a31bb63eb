#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "popcheck/error.hpp"

namespace popcheck {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A real interval with independently open or closed ends. Infinite ends are
/// always treated as open.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool lo_open = true;
    bool hi_open = true;

    static constexpr Interval closed(double a, double b) { return {a, b, false, false}; }
    static constexpr Interval open(double a, double b) { return {a, b, true, true}; }
    static constexpr Interval real_line() { return {}; }
    static constexpr Interval positive() { return {0.0, kInf, true, true}; }
    static constexpr Interval nonnegative() { return {0.0, kInf, false, true}; }

    [[nodiscard]] bool contains(double x) const {
        if (std::isnan(x)) return false;
        const bool above = lo_open ? x > lo : x >= lo;
        const bool below = hi_open ? x < hi : x <= hi;
        return above && below;
    }

    /// True when every point of `other` lies in this interval.
    [[nodiscard]] bool contains(const Interval& other) const {
        const bool lo_ok = other.lo > lo || (other.lo == lo && (!lo_open || other.lo_open));
        const bool hi_ok = other.hi < hi || (other.hi == hi && (!hi_open || other.hi_open));
        return lo_ok && hi_ok;
    }

    [[nodiscard]] bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    [[nodiscard]] bool empty() const {
        return lo > hi || (lo == hi && (lo_open || hi_open));
    }
    [[nodiscard]] double width() const { return hi - lo; }

    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        os << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
        return os.str();
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

} // namespace popcheck
