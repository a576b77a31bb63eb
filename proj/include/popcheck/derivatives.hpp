#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "popcheck/error.hpp"
#include "popcheck/function_spec.hpp"
#include "popcheck/interval.hpp"

namespace popcheck::specfun {

/// Default central-difference step eps^(1/4) * max(1, |x|).
inline double default_second_difference_step(double x) {
    static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    return base * std::max(1.0, std::abs(x));
}

/// Central second difference (f(x+h) - 2 f(x) + f(x-h)) / h^2.
inline double second_derivative(const FunctionSpec& f, double x,
                                std::optional<double> step = std::nullopt) {
    const double h = step.value_or(default_second_difference_step(x));
    if (!(h > 0.0)) throw DomainError("second_derivative: step must be positive");
    const Interval& dom = f.domain();
    if (!dom.contains(x - h) || !dom.contains(x + h)) {
        throw DomainError("second_derivative: stencil [" + format_number(x - h) + ", " +
                          format_number(x + h) + "] leaves the domain of " + f.name());
    }
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Grid estimate of inf/sup of f'' over a closed interval. This is an inner
/// approximation of [m, M]; nested grids (n -> 2n - 1) never shrink it.
struct CurvatureBounds {
    double m = 0.0;
    double M = 0.0;
    Interval interval;
    std::size_t grid_n = 0;
};

inline CurvatureBounds curvature_bounds(const FunctionSpec& f, const Interval& interval,
                                        std::size_t grid_n) {
    if (grid_n < 2) throw DomainError("curvature_bounds: grid_n must be at least 2");
    if (!interval.bounded() || interval.lo > interval.hi) {
        throw DomainError("curvature_bounds: interval must be bounded and nonempty");
    }
    const double a = interval.lo;
    const double spacing = (interval.hi - interval.lo) / static_cast<double>(grid_n - 1);
    CurvatureBounds out{kInf, -kInf, Interval::closed(interval.lo, interval.hi), grid_n};
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double x = i + 1 == grid_n ? interval.hi : a + static_cast<double>(i) * spacing;
        const double d2 = second_derivative(f, x);
        out.m = std::min(out.m, d2);
        out.M = std::max(out.M, d2);
    }
    return out;
}

} // namespace popcheck::specfun
