#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "popcheck/convexity.hpp"
#include "popcheck/derivatives.hpp"
#include "popcheck/error.hpp"
#include "popcheck/function_spec.hpp"
#include "popcheck/inequalities.hpp"
#include "popcheck/means.hpp"

namespace popcheck::ineq {

inline constexpr std::array<std::string_view, 13> kInequalityIds = {
    "popoviciu", "semiconvex", "strong",    "agm-log",   "qa-pop",   "hyp-pop",   "vol-pop",
    "al-gap",    "hpop",       "h-ratio-i", "h-ratio-ii", "h-jensen", "h-pair-pop"};

inline bool is_known_inequality(std::string_view id) {
    return std::find(kInequalityIds.begin(), kInequalityIds.end(), id) != kInequalityIds.end();
}

/// Everything an evaluator may need besides the points. Only the fields the
/// chosen inequality uses must be set.
struct EvaluationTarget {
    FunctionSpec f = FunctionSpec::exp();
    std::optional<FunctionSpec> g;              ///< h-pair-pop partner
    Generator phi = Generator::identity();      ///< qa-pop
    Generator psi = Generator::identity();      ///< qa-pop
    std::optional<convexity::HSpec> h;          ///< hpop, h-ratio-*, h-jensen, h-pair-pop
    double strong_c = 1.0;                      ///< strong
    std::optional<specfun::CurvatureBounds> bounds;  ///< semiconvex; estimated when absent
    std::size_t curvature_grid = 201;
    HJensenMode jensen_mode = HJensenMode::convex_super;
};

namespace detail {

inline const convexity::HSpec& require_h(const EvaluationTarget& target, std::string_view id) {
    if (!target.h) throw RegistryError(std::string(id) + " needs an h function");
    return *target.h;
}

} // namespace detail

/// Dispatches `id` at a triple. h-jensen treats the triple as a three-point set.
inline ResidualReport evaluate(std::string_view id, const EvaluationTarget& target, const Triple& t) {
    const FunctionSpec& f = target.f;
    if (id == "popoviciu") return popoviciu_residual(f, t);
    if (id == "semiconvex") {
        if (target.bounds) return semiconvex_report(f, t, *target.bounds);
        const Triple s = t.sorted();
        const auto bounds = specfun::curvature_bounds(f, Interval::closed(s.x, s.z),
                                                      s.x == s.z ? 2 : target.curvature_grid);
        return semiconvex_report(f, t, bounds);
    }
    if (id == "strong") return strong_convexity_residual(f, target.strong_c, t);
    if (id == "agm-log") return agm_log_corollary(t.x, t.y, t.z);
    if (id == "qa-pop") return qa_popoviciu(f, target.phi, target.psi, t);
    if (id == "hyp-pop") return hypergeometric_popoviciu(f.hypergeometric_params(), t);
    if (id == "vol-pop") {
        if (f.kind() != FunctionSpec::Kind::lp_volume) {
            throw RegistryError("vol-pop needs an lpvol:alpha function");
        }
        return volume_popoviciu(f.params()[0], t);
    }
    if (id == "al-gap") return al_popoviciu_gap(f, t);
    if (id == "hpop") return hpop_residual(f, detail::require_h(target, id), t);
    if (id == "h-ratio-i") {
        return h_ratio_popoviciu(f, detail::require_h(target, id), t, HRatioMode::convex_i);
    }
    if (id == "h-ratio-ii") {
        return h_ratio_popoviciu(f, detail::require_h(target, id), t, HRatioMode::concave_ii);
    }
    if (id == "h-jensen") {
        return h_jensen(f, detail::require_h(target, id), PointSet{t.x, t.y, t.z}, target.jensen_mode);
    }
    if (id == "h-pair-pop") {
        if (!target.g) throw RegistryError("h-pair-pop needs a partner function g");
        return h_jensen_pair_pop(f, *target.g, detail::require_h(target, id), t);
    }
    throw RegistryError("unknown inequality '" + std::string(id) + "'");
}

} // namespace popcheck::ineq
