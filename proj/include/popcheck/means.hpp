#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "popcheck/error.hpp"
#include "popcheck/interval.hpp"
#include "popcheck/parse.hpp"

namespace popcheck {

/// Three evaluation points.
struct Triple {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] std::array<double, 3> as_array() const { return {x, y, z}; }
    [[nodiscard]] double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    [[nodiscard]] Triple sorted() const {
        auto a = as_array();
        std::sort(a.begin(), a.end());
        return {a[0], a[1], a[2]};
    }
    [[nodiscard]] double centroid() const { return (x + y + z) / 3.0; }
    /// (x-y)^2 + (y-z)^2 + (z-x)^2, summed in sorted order so it is
    /// bit-identical under permutation.
    [[nodiscard]] double spread() const {
        const Triple s = sorted();
        return (s.y - s.x) * (s.y - s.x) + (s.z - s.y) * (s.z - s.y) + (s.z - s.x) * (s.z - s.x);
    }

    friend bool operator==(const Triple&, const Triple&) = default;
};

/// Points with optional weights. Absent weights mean uniform 1/n.
struct PointSet {
    std::vector<double> values;
    std::optional<std::vector<double>> weights;

    PointSet() = default;
    PointSet(std::vector<double> v) : values(std::move(v)) {}
    PointSet(std::initializer_list<double> v) : values(v) {}
    PointSet(std::vector<double> v, std::vector<double> w)
        : values(std::move(v)), weights(std::move(w)) {}

    void validate() const {
        if (values.empty()) throw DomainError("point set must be nonempty");
        if (!weights) return;
        if (weights->size() != values.size()) {
            throw DomainError("point set: " + std::to_string(weights->size()) + " weights for " +
                              std::to_string(values.size()) + " values");
        }
        double total = 0.0;
        for (double w : *weights) {
            if (!(w >= 0.0)) throw DomainError("point set: weights must be nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw DomainError("point set: weights must sum to 1, got " + format_number(total));
        }
    }

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double weight(std::size_t i) const {
        return weights ? (*weights)[i] : 1.0 / static_cast<double>(values.size());
    }
};

/// A strictly monotone continuous generator phi of a quasi-arithmetic mean.
class Generator {
public:
    enum class Kind { identity, power, log, exp };

    static Generator identity() { return Generator(Kind::identity, 1.0); }
    static Generator log() { return Generator(Kind::log, 0.0); }
    static Generator exp() { return Generator(Kind::exp, 0.0); }
    static Generator power(double p) {
        if (p == 0.0 || !std::isfinite(p)) {
            throw DomainError("power generator needs a finite p != 0 (use log for p = 0)");
        }
        return Generator(Kind::power, p);
    }

    /// identity | power:p | log | exp, plus the letters A, G, H.
    static Generator parse(std::string_view spec) {
        const auto parts = split_registry(spec);
        const std::string& name = parts.front();
        const auto params = parse_params(parts);
        if (name == "identity" || name == "id" || name == "A") {
            expect_param_count(name, params, 0);
            return identity();
        }
        if (name == "log" || name == "G") {
            expect_param_count(name, params, 0);
            return log();
        }
        if (name == "exp") {
            expect_param_count(name, params, 0);
            return exp();
        }
        if (name == "H") {
            expect_param_count(name, params, 0);
            return power(-1.0);
        }
        if (name == "power") {
            expect_param_count(name, params, 1);
            return power(params[0]);
        }
        throw RegistryError("unknown generator '" + name + "'");
    }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double parameter() const { return p_; }
    [[nodiscard]] bool increasing() const { return !(kind_ == Kind::power && p_ < 0.0); }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::log: return "log";
        case Kind::exp: return "exp";
        case Kind::power: return "power:" + format_number(p_);
        }
        return "?";
    }

    [[nodiscard]] Interval domain() const {
        switch (kind_) {
        case Kind::identity:
        case Kind::exp: return Interval::real_line();
        case Kind::log: return Interval::positive();
        case Kind::power: return p_ > 0.0 ? Interval::nonnegative() : Interval::positive();
        }
        return {};
    }

    [[nodiscard]] Interval range() const {
        switch (kind_) {
        case Kind::identity:
        case Kind::log: return Interval::real_line();
        case Kind::exp: return Interval::positive();
        case Kind::power: return p_ > 0.0 ? Interval::nonnegative() : Interval::positive();
        }
        return {};
    }

    [[nodiscard]] double apply(double x) const {
        if (!domain().contains(x)) {
            throw DomainError("generator " + name() + ": x = " + format_number(x) +
                              " outside domain " + domain().to_string());
        }
        return raw_apply(x);
    }

    [[nodiscard]] double invert(double y) const {
        if (!range().contains(y)) {
            throw DomainError("generator " + name() + ": y = " + format_number(y) +
                              " outside range " + range().to_string());
        }
        switch (kind_) {
        case Kind::identity: return y;
        case Kind::log: return std::exp(y);
        case Kind::exp: return std::log(y);
        case Kind::power:
            if (p_ == 1.0) return y;
            if (p_ == -1.0) return 1.0 / y;
            if (p_ == 2.0) return std::sqrt(y);
            return std::pow(y, 1.0 / p_);
        }
        return y;
    }

    /// Image phi(I) of an interval inside the domain; ends swap for
    /// decreasing generators.
    [[nodiscard]] Interval image(const Interval& in) const {
        if (!domain().contains(in)) {
            throw DomainError("generator " + name() + ": interval " + in.to_string() +
                              " not inside domain " + domain().to_string());
        }
        const double a = raw_apply(in.lo);
        const double b = raw_apply(in.hi);
        if (increasing()) return {a, b, in.lo_open || !std::isfinite(a), in.hi_open || !std::isfinite(b)};
        return {b, a, in.hi_open || !std::isfinite(b), in.lo_open || !std::isfinite(a)};
    }

    friend bool operator==(const Generator&, const Generator&) = default;

private:
    Generator(Kind kind, double p) : kind_(kind), p_(p) {}

    // Endpoint evaluation allows the IEEE limits log(0) = -inf, 0^-1 = inf.
    [[nodiscard]] double raw_apply(double x) const {
        switch (kind_) {
        case Kind::identity: return x;
        case Kind::log: return std::log(x);
        case Kind::exp: return std::exp(x);
        case Kind::power:
            if (p_ == 1.0) return x;
            if (p_ == -1.0) return 1.0 / x;
            return std::pow(x, p_);
        }
        return x;
    }

    Kind kind_;
    double p_;
};

namespace means {

namespace detail {

inline std::pair<double, double> weighted_min_max(const PointSet& pts) {
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts.weight(i) == 0.0) continue;
        lo = std::min(lo, pts.values[i]);
        hi = std::max(hi, pts.values[i]);
    }
    return {lo, hi};
}

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + ": arguments must be finite positive reals, got " +
                          format_number(v));
    }
}

/// expm1(d) / d, continuous at 0.
inline double phi1(double d) {
    if (std::abs(d) < 1e-8) return 1.0 + d * (0.5 + d / 6.0);
    return std::expm1(d) / d;
}

/// Second divided difference of exp at 0, d1, d2 for 0 <= d1 <= d2 <= 1:
/// sum_{k>=1} h_{k-1}(d1, d2) / (k+1)!, all terms nonnegative.
inline double exp_dd2_series(double d1, double d2) {
    double h = 1.0;       // complete homogeneous polynomial h_{k-1}(d1, d2)
    double d1_pow = 1.0;  // d1^{k-1}
    double fact = 2.0;    // (k+1)!
    double sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        const double term = h / fact;
        sum += term;
        if (term <= 1e-17 * sum) break;
        d1_pow *= d1;
        h = d2 * h + d1_pow;
        fact *= static_cast<double>(k + 2);
    }
    return sum;
}

/// (ln a, ln b, ln c) -> L(a, b, c). Twice the second divided difference of
/// exp at the log points, anchored at the smallest so no exp can overflow.
inline double log_mean3_from_logs(double la, double lb, double lc) {
    std::array<double, 3> l = {la, lb, lc};
    std::sort(l.begin(), l.end());
    const double d1 = l[1] - l[0];
    const double d2 = l[2] - l[0];
    const double base = std::exp(l[0]);
    if (d2 <= 1.0) return 2.0 * base * exp_dd2_series(d1, d2);
    // Well separated: first differences via expm1, then one subtraction over
    // a spread > 1.
    const double f01 = base * phi1(d1);
    const double f12 = std::exp(l[1]) * phi1(l[2] - l[1]);
    return 2.0 * (f12 - f01) / d2;
}

/// (ln a, ln b) -> L(a, b).
inline double log_mean2_from_logs(double la, double lb) {
    const double lo = std::min(la, lb);
    return std::exp(lo) * phi1(std::max(la, lb) - lo);
}

} // namespace detail

inline double apply(const Generator& g, double x) { return g.apply(x); }
inline double invert(const Generator& g, double y) { return g.invert(y); }

/// phi^{-1}(sum_k w_k phi(x_k)), clamped into [min, max] of the weighted points.
inline double qa_mean(const Generator& g, const PointSet& pts) {
    pts.validate();
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) acc += pts.weight(i) * g.apply(pts.values[i]);
    const auto [lo, hi] = detail::weighted_min_max(pts);
    return std::clamp(g.invert(acc), lo, hi);
}

/// Power mean of order p in [-inf, +inf]: min, (sum w x^p)^(1/p), the
/// weighted geometric mean at p = 0, max.
inline double power_mean(double p, const PointSet& pts) {
    pts.validate();
    const auto [lo, hi] = detail::weighted_min_max(pts);
    if (p == -kInf) return lo;
    if (p == kInf) return hi;
    for (double v : pts.values) {
        if (p <= 0.0 ? !(v > 0.0) : !(v >= 0.0)) {
            throw DomainError("power_mean: order " + format_number(p) +
                              " requires " + (p <= 0.0 ? "positive" : "nonnegative") +
                              " values, got " + format_number(v));
        }
    }
    if (p == 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) acc += pts.weight(i) * std::log(pts.values[i]);
        return std::clamp(std::exp(acc), lo, hi);
    }
    if (hi == 0.0) return 0.0;
    // Scale by the maximum so large |p| neither overflows nor underflows.
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts.weight(i) == 0.0) continue;
        acc += pts.weight(i) * std::pow(pts.values[i] / hi, p);
    }
    return std::clamp(hi * std::pow(acc, 1.0 / p), lo, hi);
}

inline constexpr double kLogMeanCoincidence = 1e-12;

/// Logarithmic mean (a - b) / (ln a - ln b); a when the logs coincide.
inline double log_mean2(double a, double b) {
    detail::require_positive(a, "log_mean2");
    detail::require_positive(b, "log_mean2");
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double d = std::log1p((hi - lo) / lo);
    if (d <= kLogMeanCoincidence) return a;
    return std::clamp(lo * detail::phi1(d), lo, hi);
}

/// Neuman's three-point logarithmic mean
///   2a / (ln(a/b) ln(a/c)) + 2b / (ln(b/a) ln(b/c)) + 2c / (ln(c/a) ln(c/b)),
/// evaluated as twice the second divided difference of exp at the logs.
/// The representation is continuous through every coincidence pattern.
inline double log_mean3(double a, double b, double c) {
    detail::require_positive(a, "log_mean3");
    detail::require_positive(b, "log_mean3");
    detail::require_positive(c, "log_mean3");
    std::array<double, 3> v = {a, b, c};
    std::sort(v.begin(), v.end());
    const double d1 = std::log1p((v[1] - v[0]) / v[0]);
    const double d2 = std::log1p((v[2] - v[0]) / v[0]);
    double out = 0.0;
    if (d2 <= 1.0) {
        out = 2.0 * v[0] * detail::exp_dd2_series(d1, d2);
    } else {
        const double f01 = v[0] * detail::phi1(d1);
        const double f12 = v[1] * detail::phi1(std::log1p((v[2] - v[1]) / v[1]));
        out = 2.0 * (f12 - f01) / d2;
    }
    return std::clamp(out, v[0], v[2]);
}

/// Identric mean e^{-1} (b^b / a^a)^{1/(b-a)}, in log space:
/// ln I = ln a + (b/a) ln(1+r)/r - 1 with r = (b - a)/a.
inline double identric_mean(double a, double b) {
    detail::require_positive(a, "identric_mean");
    detail::require_positive(b, "identric_mean");
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double r = (hi - lo) / lo;
    if (r <= kLogMeanCoincidence) return a;
    const double log_ratio = std::log1p(r) / r;
    return std::clamp(lo * std::exp((hi / lo) * log_ratio - 1.0), lo, hi);
}

} // namespace means
} // namespace popcheck
