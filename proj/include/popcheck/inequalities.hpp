#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "popcheck/convexity.hpp"
#include "popcheck/derivatives.hpp"
#include "popcheck/error.hpp"
#include "popcheck/function_spec.hpp"
#include "popcheck/means.hpp"
#include "popcheck/specfun.hpp"

namespace popcheck::ineq {

/// Base verdict tolerance, scaled by max(1, |lhs|, |rhs|).
inline constexpr double kDefaultTolerance = 1e-9;

enum class Outcome { holds, violated };

inline std::string to_string(Outcome o) { return o == Outcome::holds ? "holds" : "violated"; }

/// One evaluated inequality. residual = lhs - rhs, and residual >= 0 is the
/// direction the inequality asserts.
struct ResidualReport {
    std::string inequality_id;
    std::vector<double> point;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    Outcome verdict = Outcome::holds;
    double tolerance = 0.0;
    std::vector<std::string> hypothesis_flags;

    /// Recomputes tolerance and verdict from a new base tolerance.
    void rescore(double base_tolerance) {
        tolerance = base_tolerance * std::max({1.0, std::abs(lhs), std::abs(rhs)});
        verdict = residual >= -tolerance ? Outcome::holds : Outcome::violated;
    }

    [[nodiscard]] bool holds() const { return verdict == Outcome::holds; }
};

inline ResidualReport make_report(std::string id, std::vector<double> point, double lhs, double rhs,
                                  std::vector<std::string> flags = {}) {
    ResidualReport r;
    r.inequality_id = std::move(id);
    r.point = std::move(point);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = lhs - rhs;
    r.hypothesis_flags = std::move(flags);
    r.rescore(kDefaultTolerance);
    return r;
}

namespace detail {

inline std::vector<double> as_vector(const Triple& t) { return {t.x, t.y, t.z}; }

/// Values of f at the triple, its centroid and its pairwise midpoints, for a
/// sorted triple so every evaluator is permutation invariant.
struct Samples {
    double fx, fy, fz, fc;
    double fxy, fyz, fzx;
};

template <class F>
Samples sample(const F& f, const Triple& t) {
    const Triple s = t.sorted();
    return {f(s.x), f(s.y), f(s.z), f(s.centroid()),
            f(0.5 * (s.x + s.y)), f(0.5 * (s.y + s.z)), f(0.5 * (s.z + s.x))};
}

struct PopoviciuSides {
    double lhs;
    double rhs;
};

inline PopoviciuSides popoviciu_sides(const Samples& s) {
    return {(s.fx + s.fy + s.fz) / 3.0 + s.fc, 2.0 / 3.0 * (s.fxy + s.fyz + s.fzx)};
}

/// Coefficients max{h(1/2), 2h(1/4)} and 2h(3/4).
inline std::array<double, 2> hpop_coefficients(const convexity::HSpec& h) {
    return {std::max(h(0.5), 2.0 * h(0.25)), 2.0 * h(0.75)};
}

} // namespace detail

/// Classic three-point Popoviciu inequality:
/// [f(x)+f(y)+f(z)]/3 + f((x+y+z)/3) >= (2/3)[f((x+y)/2) + f((y+z)/2) + f((z+x)/2)].
inline ResidualReport popoviciu_residual(const FunctionSpec& f, const Triple& t) {
    const auto sides = detail::popoviciu_sides(detail::sample(f, t));
    return make_report("popoviciu", detail::as_vector(t), sides.lhs, sides.rhs);
}

/// Two-sided bound M S/36 >= D >= m S/36 for a C^2 function with curvature
/// bounds [m, M], where D is the Popoviciu residual and S the spread.
struct SandwichGaps {
    double upper_gap = 0.0;  ///< M S / 36 - D
    double lower_gap = 0.0;  ///< D - m S / 36
    double popoviciu = 0.0;  ///< D
    double spread = 0.0;     ///< S
};

inline SandwichGaps semiconvex_sandwich(const FunctionSpec& f, const Triple& t,
                                        const specfun::CurvatureBounds& bounds) {
    for (double v : t.as_array()) {
        if (!bounds.interval.contains(v)) {
            throw DomainError("semiconvex_sandwich: point " + format_number(v) +
                              " outside the curvature interval " + bounds.interval.to_string());
        }
    }
    const auto sides = detail::popoviciu_sides(detail::sample(f, t));
    SandwichGaps g;
    g.popoviciu = sides.lhs - sides.rhs;
    g.spread = t.spread();
    g.upper_gap = bounds.M * g.spread / 36.0 - g.popoviciu;
    g.lower_gap = g.popoviciu - bounds.m * g.spread / 36.0;
    return g;
}

/// The binding side of the sandwich as a single report.
inline ResidualReport semiconvex_report(const FunctionSpec& f, const Triple& t,
                                        const specfun::CurvatureBounds& bounds) {
    const auto g = semiconvex_sandwich(f, t, bounds);
    std::vector<std::string> flags = {"curvature_bounds_grid_estimate"};
    if (g.lower_gap <= g.upper_gap) {
        return make_report("semiconvex", detail::as_vector(t), g.popoviciu,
                           bounds.m * g.spread / 36.0, std::move(flags));
    }
    return make_report("semiconvex", detail::as_vector(t), bounds.M * g.spread / 36.0, g.popoviciu,
                       std::move(flags));
}

/// D >= C S / 36 for f with f - (C/2) x^2 convex.
inline ResidualReport strong_convexity_residual(const FunctionSpec& f, double C, const Triple& t) {
    if (!(C > 0.0)) throw DomainError("strong_convexity_residual: C must be positive");
    const auto sides = detail::popoviciu_sides(detail::sample(f, t));
    return make_report("strong", detail::as_vector(t), sides.lhs - sides.rhs, C * t.spread() / 36.0,
                       {"strong_convexity_caller_asserted"});
}

/// (a+b+c)/3 + (abc)^{1/3} - (2/3)(sqrt(ab) + sqrt(bc) + sqrt(ca))
///   >= (ln^2(a/b) + ln^2(b/c) + ln^2(c/a)) / 36   for a, b, c >= 1.
inline ResidualReport agm_log_corollary(double a, double b, double c) {
    if (!(a >= 1.0) || !(b >= 1.0) || !(c >= 1.0)) {
        throw DomainError("agm_log_corollary: arguments must be >= 1");
    }
    const Triple s = Triple{a, b, c}.sorted();
    const double lhs = (s.x + s.y + s.z) / 3.0 + std::cbrt(s.x * s.y * s.z) -
                       2.0 / 3.0 * (std::sqrt(s.x * s.y) + std::sqrt(s.y * s.z) + std::sqrt(s.z * s.x));
    const double lab = std::log(s.x / s.y);
    const double lbc = std::log(s.y / s.z);
    const double lca = std::log(s.z / s.x);
    const double rhs = (lab * lab + lbc * lbc + lca * lca) / 36.0;
    return make_report("agm-log", {a, b, c}, lhs, rhs);
}

/// Popoviciu's inequality for (M_phi, M_psi)-convex f:
///   M_psi(M_psi(f(x), f(y), f(z)), f(M_phi(x, y, z)))
///     >= M_psi(f(M_phi(x, y)), f(M_phi(y, z)), f(M_phi(z, x))).
/// The sense is the same for increasing and decreasing psi: a decreasing psi
/// makes the transform concave and psi^{-1} flips the inequality back.
inline ResidualReport qa_popoviciu(const FunctionSpec& f, const Generator& phi, const Generator& psi,
                                   const Triple& t) {
    using means::qa_mean;
    const Triple s = t.sorted();
    const double a = qa_mean(psi, PointSet{f(s.x), f(s.y), f(s.z)});
    const double b = f(qa_mean(phi, PointSet{s.x, s.y, s.z}));
    const double lhs = qa_mean(psi, PointSet{a, b});
    const double rhs = qa_mean(psi, PointSet{f(qa_mean(phi, PointSet{s.x, s.y})),
                                             f(qa_mean(phi, PointSet{s.y, s.z})),
                                             f(qa_mean(phi, PointSet{s.z, s.x}))});
    std::vector<std::string> flags = {"mn_convexity_caller_asserted"};
    if (!psi.increasing()) flags.emplace_back("psi_decreasing");
    return make_report("qa-pop", detail::as_vector(t), lhs, rhs, std::move(flags));
}

/// Reciprocal-average form for F = 2F1(a, b; c; .) when 1/F is concave:
///   (1/3)[1/F((x+y)/2) + 1/F((y+z)/2) + 1/F((z+x)/2)]
///     >= (1/2)[(1/3)(1/F(x) + 1/F(y) + 1/F(z)) + 1/F((x+y+z)/3)].
inline ResidualReport hypergeometric_popoviciu(const specfun::HypergeometricParams& params,
                                               const Triple& t) {
    params.validate();
    for (double v : t.as_array()) {
        if (!(v > 0.0 && v < 1.0)) {
            throw DomainError("hypergeometric_popoviciu: points must lie in (0, 1), got " +
                              format_number(v));
        }
    }
    const auto inv = [&](double x) { return 1.0 / specfun::hyp2f1(params, x); };
    const auto s = detail::sample(inv, t);
    const double lhs = (s.fxy + s.fyz + s.fzx) / 3.0;
    const double rhs = 0.5 * ((s.fx + s.fy + s.fz) / 3.0 + s.fc);
    std::vector<std::string> flags;
    if (!params.reciprocal_concavity_hypothesis()) flags.emplace_back("hypothesis_unmet");
    return make_report("hyp-pop", detail::as_vector(t), lhs, rhs, std::move(flags));
}

/// Popoviciu for the (H, G)-concave volume V_alpha, in log space:
///   (V(H(p,q)) V(H(q,r)) V(H(r,p)))^{1/3}
///     >= sqrt((V(p) V(q) V(r))^{1/3} V(3 / (1/p + 1/q + 1/r))).
inline ResidualReport volume_popoviciu(double alpha, const Triple& t) {
    const Triple s = t.sorted();
    for (double v : s.as_array()) {
        if (!(v > 0.0)) throw DomainError("volume_popoviciu: p, q, r must be positive");
    }
    const auto lnv = [&](double p) { return specfun::ln_lp_ball_volume(alpha, p); };
    const auto harm2 = [](double u, double v) { return 2.0 / (1.0 / u + 1.0 / v); };
    const double harm3 = 3.0 / (1.0 / s.x + 1.0 / s.y + 1.0 / s.z);
    const double log_lhs = (lnv(harm2(s.x, s.y)) + lnv(harm2(s.y, s.z)) + lnv(harm2(s.z, s.x))) / 3.0;
    const double log_rhs = 0.5 * ((lnv(s.x) + lnv(s.y) + lnv(s.z)) / 3.0 + lnv(harm3));
    return make_report("vol-pop", detail::as_vector(t), std::exp(log_lhs), std::exp(log_rhs));
}

/// The (A, L) Popoviciu gap
///   E = L2(L3(f(x), f(y), f(z)), f((x+y+z)/3)) - L3(f((x+y)/2), f((y+z)/2), f((z+x)/2)),
/// with L2, L3 the two- and three-point logarithmic means. The first term is
/// the raw fraction (L3 - f(c)) / (ln L3 - ln f(c)) written as a log mean.
/// No sign is asserted.
inline ResidualReport al_popoviciu_gap(const FunctionSpec& f, const Triple& t) {
    const auto s = detail::sample([&](double v) { return f.log_value(v); }, t);
    const double l3 = means::detail::log_mean3_from_logs(s.fx, s.fy, s.fz);
    const double lhs = means::detail::log_mean2_from_logs(std::log(l3), s.fc);
    const double rhs = means::detail::log_mean3_from_logs(s.fxy, s.fyz, s.fzx);
    return make_report("al-gap", detail::as_vector(t), lhs, rhs, {"no_sign_asserted"});
}

/// Popoviciu for nonnegative h-convex f with concave h:
///   max{h(1/2), 2h(1/4)} (f(x)+f(y)+f(z)) + 2h(3/4) f((x+y+z)/3)
///     >= f((x+y)/2) + f((y+z)/2) + f((z+x)/2).
inline ResidualReport hpop_residual(const FunctionSpec& f, const convexity::HSpec& h,
                                    const Triple& t) {
    const auto s = detail::sample(f, t);
    const auto [k1, k2] = detail::hpop_coefficients(h);
    const double lhs = k1 * (s.fx + s.fy + s.fz) + k2 * s.fc;
    const double rhs = s.fxy + s.fyz + s.fzx;
    std::vector<std::string> flags;
    if (!h.declared_concave()) flags.emplace_back("h_not_concave");
    if (std::min({s.fx, s.fy, s.fz, s.fc}) < 0.0) flags.emplace_back("f_negative");
    return make_report("hpop", detail::as_vector(t), lhs, rhs, std::move(flags));
}

enum class HRatioMode { convex_i, concave_ii };

/// (1 - h(1/3)) / (2 h(1/2)) for convex_i, (h(1/3) - 1) / (2 h(1/2)) for
/// concave_ii. h(1/3) = 1 has no coefficient.
inline double h_ratio_coefficient(const convexity::HSpec& h, HRatioMode mode) {
    const double h3 = h(1.0 / 3.0);
    if (h3 == 1.0) throw DomainError("h_ratio_popoviciu: h(1/3) = 1 makes the coefficient degenerate");
    const double num = mode == HRatioMode::convex_i ? 1.0 - h3 : h3 - 1.0;
    return num / (2.0 * h(0.5));
}

/// convex_i:  f(x)+f(y)+f(z) - f(c) >= k Sum f(midpoints), h supermultiplicative, h(1/3) < 1.
/// concave_ii: f(c) - (f(x)+f(y)+f(z)) >= k Sum f(midpoints), h submultiplicative, h(1/3) > 1.
inline ResidualReport h_ratio_popoviciu(const FunctionSpec& f, const convexity::HSpec& h,
                                        const Triple& t, HRatioMode mode) {
    const double k = h_ratio_coefficient(h, mode);
    const auto s = detail::sample(f, t);
    const double mids = s.fxy + s.fyz + s.fzx;
    const double h3 = h(1.0 / 3.0);
    std::vector<std::string> flags;
    if (mode == HRatioMode::convex_i) {
        if (!(h3 < 1.0)) flags.emplace_back("h_third_not_below_one");
        if (!h.declared_supermultiplicative()) flags.emplace_back("h_not_supermultiplicative");
        return make_report("h-ratio-i", detail::as_vector(t), s.fx + s.fy + s.fz - s.fc, k * mids,
                           std::move(flags));
    }
    if (!(h3 > 1.0)) flags.emplace_back("h_third_not_above_one");
    if (!h.declared_submultiplicative()) flags.emplace_back("h_not_submultiplicative");
    return make_report("h-ratio-ii", detail::as_vector(t), s.fc - (s.fx + s.fy + s.fz), k * mids,
                       std::move(flags));
}

enum class HJensenMode { convex_super, concave_sub };

/// convex_super: h(1/n) Sum f(x_i) >= f(mean); concave_sub: the reverse.
inline ResidualReport h_jensen(const FunctionSpec& f, const convexity::HSpec& h, const PointSet& pts,
                               HJensenMode mode) {
    pts.validate();
    const std::size_t n = pts.size();
    if (n < 2) throw DomainError("h_jensen: needs at least two points (h is defined on (0, 1))");
    if (pts.weights) {
        for (double w : *pts.weights) {
            if (std::abs(w - 1.0 / static_cast<double>(n)) > 1e-12) {
                throw DomainError("h_jensen: only uniform weights are supported");
            }
        }
    }
    std::vector<double> sorted = pts.values;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    double sum_x = 0.0;
    for (double v : sorted) {
        total += f(v);
        sum_x += v;
    }
    const double mean = std::clamp(sum_x / static_cast<double>(n), sorted.front(), sorted.back());
    const double weighted = h(1.0 / static_cast<double>(n)) * total;
    const double at_mean = f(mean);
    if (mode == HJensenMode::convex_super) {
        std::vector<std::string> flags;
        if (!h.declared_supermultiplicative()) flags.emplace_back("h_not_supermultiplicative");
        return make_report("h-jensen", pts.values, weighted, at_mean, std::move(flags));
    }
    std::vector<std::string> flags;
    if (!h.declared_submultiplicative()) flags.emplace_back("h_not_submultiplicative");
    return make_report("h-jensen", pts.values, at_mean, weighted, std::move(flags));
}

/// Popoviciu for an h-Jensen pair (f, g) of positive functions, h concave:
///   max{h(1/2), 2h(1/4)} (g(x)+g(y)+g(z)) + 2h(3/4) g((x+y+z)/3)
///     >= f((x+y)/2) + f((y+z)/2) + f((z+x)/2).
inline ResidualReport h_jensen_pair_pop(const FunctionSpec& f, const FunctionSpec& g,
                                        const convexity::HSpec& h, const Triple& t) {
    const auto sf = detail::sample(f, t);
    const auto sg = detail::sample(g, t);
    const auto [k1, k2] = detail::hpop_coefficients(h);
    const double lhs = k1 * (sg.fx + sg.fy + sg.fz) + k2 * sg.fc;
    const double rhs = sf.fxy + sf.fyz + sf.fzx;
    std::vector<std::string> flags = {"h_jensen_pair_caller_asserted"};
    if (!h.declared_concave()) flags.emplace_back("h_not_concave");
    if (std::min({sg.fx, sg.fy, sg.fz, sg.fc, sf.fxy, sf.fyz, sf.fzx}) <= 0.0) {
        flags.emplace_back("nonpositive_values");
    }
    return make_report("h-pair-pop", detail::as_vector(t), lhs, rhs, std::move(flags));
}

/// Grid minimum of h(1-l) g(x) + h(l) g(y) - f((1-l) x + l y); nonnegative
/// (within tolerance) certifies (f, g) as an h-Jensen pair on the grid.
inline convexity::HDefect h_jensen_pair_defect(const FunctionSpec& f, const FunctionSpec& g,
                                               const convexity::HSpec& h, std::size_t grid_n,
                                               std::optional<Interval> interval = std::nullopt) {
    return convexity::h_pair_defect(f, g, h, interval.value_or(f.domain()), grid_n);
}

} // namespace popcheck::ineq
