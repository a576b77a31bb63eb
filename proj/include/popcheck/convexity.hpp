#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "popcheck/error.hpp"
#include "popcheck/function_spec.hpp"
#include "popcheck/interval.hpp"
#include "popcheck/means.hpp"
#include "popcheck/parse.hpp"

namespace popcheck::convexity {

/// Absolute defect tolerance, scaled by max(1, largest magnitude on the grid).
inline constexpr double kDefectTolerance = 1e-9;

inline double scaled_tolerance(double magnitude) {
    return kDefectTolerance * std::max(1.0, magnitude);
}

/// The composition psi o f o phi^{-1} on phi(I). f is (M_phi, M_psi)-convex
/// iff this is convex (psi increasing) or concave (psi decreasing).
class AczelTransform {
public:
    AczelTransform(FunctionSpec f, Generator phi, Generator psi)
        : f_(std::move(f)), phi_(phi), psi_(psi) {
        if (!phi_.domain().contains(f_.domain())) {
            throw DomainError("aczel_transform: domain of " + f_.name() + " " +
                              f_.domain().to_string() + " is not inside the domain of phi = " +
                              phi_.name() + " " + phi_.domain().to_string());
        }
        domain_ = phi_.image(f_.domain());
    }

    double operator()(double t) const {
        double x = phi_.invert(t);
        const Interval& d = f_.domain();
        // invert(apply(x)) may land one ulp outside a closed end.
        if (!d.lo_open) x = std::max(x, d.lo);
        if (!d.hi_open) x = std::min(x, d.hi);
        return psi_.apply(f_(x));
    }

    [[nodiscard]] const Interval& domain() const { return domain_; }
    [[nodiscard]] const FunctionSpec& function() const { return f_; }
    [[nodiscard]] const Generator& phi() const { return phi_; }
    [[nodiscard]] const Generator& psi() const { return psi_; }

private:
    FunctionSpec f_;
    Generator phi_;
    Generator psi_;
    Interval domain_;
};

inline AczelTransform aczel_transform(const FunctionSpec& f, const Generator& phi,
                                      const Generator& psi) {
    return AczelTransform(f, phi, psi);
}

/// Closed interval used for grids: open or infinite ends are rejected, open
/// finite ends are pulled inward by width / (grid_n + 1).
inline Interval grid_interval(const Interval& in, std::size_t grid_n) {
    if (!in.bounded() || in.lo >= in.hi) {
        throw DomainError("grid sweep needs a bounded nonempty interval, got " + in.to_string());
    }
    const double margin = in.width() / static_cast<double>(grid_n + 1);
    return Interval::closed(in.lo_open ? in.lo + margin : in.lo, in.hi_open ? in.hi - margin : in.hi);
}

/// grid_n uniform nodes including both ends of a closed interval.
inline std::vector<double> closed_grid(const Interval& iv, std::size_t grid_n) {
    std::vector<double> out(grid_n);
    const double spacing = (iv.hi - iv.lo) / static_cast<double>(grid_n - 1);
    for (std::size_t i = 0; i < grid_n; ++i) out[i] = iv.lo + static_cast<double>(i) * spacing;
    out.back() = iv.hi;
    return out;
}

/// i / (grid_n + 1) for i = 1..grid_n: the open unit interval minus a margin.
inline std::vector<double> open_unit_grid(std::size_t grid_n) {
    std::vector<double> out(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
        out[i] = static_cast<double>(i + 1) / static_cast<double>(grid_n + 1);
    }
    return out;
}

struct MidpointDefect {
    double min_defect = kInf;  ///< min over pairs of (g(u)+g(v))/2 - g((u+v)/2)
    double min_u = 0.0;
    double min_v = 0.0;
    double max_defect = -kInf;
    double max_u = 0.0;
    double max_v = 0.0;
    double magnitude = 0.0;  ///< max |g| on the grid
    std::size_t grid_n = 0;
};

/// Midpoint-convexity defect of g over grid pairs u <= v of a closed
/// interval. g is sampled on the 2n-1 point refinement, so every midpoint is
/// itself a node. Witnesses are the lexicographically smallest minimizing and
/// maximizing index pairs.
template <std::invocable<double> G>
MidpointDefect midpoint_convexity_defect(const G& g, const Interval& interval, std::size_t grid_n) {
    if (grid_n < 3) throw DomainError("midpoint_convexity_defect: grid_n must be at least 3");
    const Interval iv = grid_interval(interval, grid_n);
    const auto nodes = closed_grid(iv, 2 * grid_n - 1);
    std::vector<double> values(nodes.size());
    MidpointDefect out;
    out.grid_n = grid_n;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        values[j] = static_cast<double>(g(nodes[j]));
        out.magnitude = std::max(out.magnitude, std::abs(values[j]));
    }
    for (std::size_t i = 0; i < grid_n; ++i) {
        for (std::size_t k = i; k < grid_n; ++k) {
            const double d = 0.5 * (values[2 * i] + values[2 * k]) - values[i + k];
            if (d < out.min_defect) {
                out.min_defect = d;
                out.min_u = nodes[2 * i];
                out.min_v = nodes[2 * k];
            }
            if (d > out.max_defect) {
                out.max_defect = d;
                out.max_u = nodes[2 * i];
                out.max_v = nodes[2 * k];
            }
        }
    }
    return out;
}

enum class Verdict { convex, concave, neither };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::convex: return "convex";
    case Verdict::concave: return "concave";
    case Verdict::neither: return "neither";
    }
    return "?";
}

/// Grid verdict for a midpoint defect. Affine data counts as convex.
inline Verdict classify(const MidpointDefect& d, double tolerance) {
    if (d.min_defect >= -tolerance) return Verdict::convex;
    if (d.max_defect <= tolerance) return Verdict::concave;
    return Verdict::neither;
}

struct MNConvexityReport {
    Verdict verdict = Verdict::neither;            ///< for f relative to (M_phi, M_psi)
    Verdict transform_verdict = Verdict::neither;  ///< raw, for psi o f o phi^{-1}
    bool affine = false;                           ///< transform both convex and concave
    bool psi_increasing = true;
    MidpointDefect transform_defect;
    double tolerance = 0.0;
    Interval transform_domain;
    std::size_t grid_n = 0;
};

/// Grid-certified (M_phi, M_psi)-convexity of f on its (bounded) domain.
inline MNConvexityReport mn_convexity_check(const FunctionSpec& f, const Generator& phi,
                                            const Generator& psi, std::size_t grid_n) {
    const AczelTransform g(f, phi, psi);
    MNConvexityReport out;
    out.grid_n = grid_n;
    out.transform_domain = g.domain();
    out.psi_increasing = psi.increasing();
    out.transform_defect = midpoint_convexity_defect(g, g.domain(), grid_n);
    out.tolerance = scaled_tolerance(out.transform_defect.magnitude);
    out.transform_verdict = classify(out.transform_defect, out.tolerance);
    out.affine = out.transform_defect.min_defect >= -out.tolerance &&
                 out.transform_defect.max_defect <= out.tolerance;
    if (out.psi_increasing || out.affine || out.transform_verdict == Verdict::neither) {
        out.verdict = out.transform_verdict;
    } else {
        out.verdict = out.transform_verdict == Verdict::convex ? Verdict::concave : Verdict::convex;
    }
    return out;
}

/// h : (0,1) -> (0, inf) from the four named classes: identity (ordinary
/// convexity), power s in (0,1] (Breckner s-convexity), reciprocal
/// (Godunova-Levin), constant one (P-convexity).
class HSpec {
public:
    enum class Kind { identity, power, reciprocal, constant_one };

    static HSpec identity() { return HSpec(Kind::identity, 1.0); }
    static HSpec power(double s) {
        if (!(s > 0.0 && s <= 1.0)) {
            throw DomainError("h power: s must lie in (0, 1], got " + format_number(s));
        }
        return HSpec(Kind::power, s);
    }
    static HSpec reciprocal() { return HSpec(Kind::reciprocal, 0.0); }
    static HSpec constant_one() { return HSpec(Kind::constant_one, 0.0); }

    /// identity | power:s | reciprocal | one
    static HSpec parse(std::string_view spec) {
        const auto parts = split_registry(spec);
        const std::string& name = parts.front();
        const auto params = parse_params(parts);
        if (name == "power") {
            expect_param_count(name, params, 1);
            return power(params[0]);
        }
        expect_param_count(name, params, 0);
        if (name == "identity" || name == "id") return identity();
        if (name == "reciprocal" || name == "godunova-levin") return reciprocal();
        if (name == "one" || name == "constant_one" || name == "P") return constant_one();
        throw RegistryError("unknown h kind '" + name + "'");
    }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double exponent() const { return s_; }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::power: return "power:" + format_number(s_);
        case Kind::reciprocal: return "reciprocal";
        case Kind::constant_one: return "one";
        }
        return "?";
    }

    double operator()(double lam) const {
        if (!(lam > 0.0 && lam < 1.0)) {
            throw DomainError("h(" + format_number(lam) + "): h is defined on (0, 1) only");
        }
        switch (kind_) {
        case Kind::identity: return lam;
        case Kind::power: return s_ == 0.5 ? std::sqrt(lam) : std::pow(lam, s_);
        case Kind::reciprocal: return 1.0 / lam;
        case Kind::constant_one: return 1.0;
        }
        return lam;
    }

    /// Analytic properties of the kind, as opposed to grid-checked ones.
    [[nodiscard]] bool declared_concave() const { return kind_ != Kind::reciprocal; }
    [[nodiscard]] bool declared_supermultiplicative() const { return true; }
    [[nodiscard]] bool declared_submultiplicative() const { return true; }

    friend bool operator==(const HSpec&, const HSpec&) = default;

private:
    HSpec(Kind kind, double s);

    Kind kind_;
    double s_;
};

inline double h_eval(const HSpec& h, double lam) { return h(lam); }

enum class HProperty { h1_condition, concave, supermultiplicative, submultiplicative };

inline std::string to_string(HProperty p) {
    switch (p) {
    case HProperty::h1_condition: return "h1_condition";
    case HProperty::concave: return "concave";
    case HProperty::supermultiplicative: return "supermultiplicative";
    case HProperty::submultiplicative: return "submultiplicative";
    }
    return "?";
}

struct PropertyCheck {
    bool holds = false;
    double min_slack = kInf;
    double witness_a = 0.0;
    double witness_b = 0.0;
    double tolerance = 0.0;
    std::size_t grid_n = 0;
};

/// Grid check over lambda_i = i/(n+1). Pair properties scan all pairs.
inline PropertyCheck h_property_check(const HSpec& h, HProperty property, std::size_t grid_n) {
    if (grid_n < 3) throw DomainError("h_property_check: grid_n must be at least 3");
    const auto grid = open_unit_grid(grid_n);
    PropertyCheck out;
    out.grid_n = grid_n;
    double magnitude = 0.0;
    auto consider = [&](double slack, double a, double b, double scale) {
        magnitude = std::max(magnitude, scale);
        if (slack < out.min_slack) {
            out.min_slack = slack;
            out.witness_a = a;
            out.witness_b = b;
        }
    };
    switch (property) {
    case HProperty::h1_condition:
        for (double lam : grid) {
            const double s = h(1.0 - lam) + h(lam);
            consider(s - 1.0, lam, 1.0 - lam, s);
        }
        break;
    case HProperty::concave:
        for (std::size_t i = 0; i < grid_n; ++i) {
            for (std::size_t k = i; k < grid_n; ++k) {
                const double u = grid[i];
                const double v = grid[k];
                const double mid = h(0.5 * (u + v));
                const double chord = 0.5 * (h(u) + h(v));
                consider(mid - chord, u, v, std::max(mid, chord));
            }
        }
        break;
    case HProperty::supermultiplicative:
    case HProperty::submultiplicative:
        for (std::size_t i = 0; i < grid_n; ++i) {
            for (std::size_t k = i; k < grid_n; ++k) {
                const double u = grid[i];
                const double v = grid[k];
                const double joint = h(u * v);
                const double product = h(u) * h(v);
                const double slack =
                    property == HProperty::supermultiplicative ? joint - product : product - joint;
                consider(slack, u, v, std::max(joint, product));
            }
        }
        break;
    }
    out.tolerance = scaled_tolerance(magnitude);
    out.holds = out.min_slack >= -out.tolerance;
    return out;
}

inline HSpec::HSpec(Kind kind, double s) : kind_(kind), s_(s) {
    const auto check = h_property_check(*this, HProperty::h1_condition, 10000);
    if (!check.holds) {
        throw DomainError("h " + name() + " violates h(1-l) + h(l) >= 1 at l = " +
                          format_number(check.witness_a));
    }
}

struct HDefect {
    double value = kInf;  ///< min of h(1-l) g(x) + h(l) g(y) - f((1-l) x + l y)
    double x = 0.0;
    double y = 0.0;
    double lambda = 0.0;
    double tolerance = 0.0;
    bool holds = false;
    std::size_t grid_n = 0;
};

/// Grid minimum of h(1-l) g(x) + h(l) g(y) - f((1-l) x + l y) over x, y on a
/// closed grid of `interval` and l on the open unit grid. With g = f this is
/// the h-convexity defect; otherwise it certifies an h-Jensen pair.
template <std::invocable<double> F, std::invocable<double> G>
HDefect h_pair_defect(const F& f, const G& g, const HSpec& h, const Interval& interval,
                      std::size_t grid_n) {
    if (grid_n < 3) throw DomainError("h defect: grid_n must be at least 3");
    const Interval iv = grid_interval(interval, grid_n);
    const auto xs = closed_grid(iv, grid_n);
    const auto lams = open_unit_grid(grid_n);
    std::vector<double> gx(grid_n);
    std::vector<double> h_lo(grid_n);
    std::vector<double> h_hi(grid_n);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < grid_n; ++i) {
        gx[i] = static_cast<double>(g(xs[i]));
        h_lo[i] = h(1.0 - lams[i]);
        h_hi[i] = h(lams[i]);
        magnitude = std::max(magnitude, std::abs(gx[i]));
    }
    HDefect out;
    out.grid_n = grid_n;
    for (std::size_t i = 0; i < grid_n; ++i) {
        for (std::size_t j = 0; j < grid_n; ++j) {
            const double lo = std::min(xs[i], xs[j]);
            const double hi = std::max(xs[i], xs[j]);
            for (std::size_t k = 0; k < grid_n; ++k) {
                const double lam = lams[k];
                const double p = std::clamp((1.0 - lam) * xs[i] + lam * xs[j], lo, hi);
                const double fp = static_cast<double>(f(p));
                const double bound = h_lo[k] * gx[i] + h_hi[k] * gx[j];
                magnitude = std::max({magnitude, std::abs(fp), std::abs(bound)});
                const double d = bound - fp;
                if (d < out.value) {
                    out.value = d;
                    out.x = xs[i];
                    out.y = xs[j];
                    out.lambda = lam;
                }
            }
        }
    }
    out.tolerance = scaled_tolerance(magnitude);
    out.holds = out.value >= -out.tolerance;
    return out;
}

/// h-convexity defect of f over `interval` (f's own domain when omitted).
inline HDefect h_convexity_defect(const FunctionSpec& f, const HSpec& h, std::size_t grid_n,
                                  std::optional<Interval> interval = std::nullopt) {
    return h_pair_defect(f, f, h, interval.value_or(f.domain()), grid_n);
}

} // namespace popcheck::convexity
