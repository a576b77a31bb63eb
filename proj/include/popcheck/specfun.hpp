#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "popcheck/error.hpp"

namespace popcheck::specfun {

namespace detail {

// Lanczos approximation, g = 7, nine coefficients. Relative error is a few
// ulp for arguments >= 1/2.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Sum A_g(z) for Gamma(z + 1), z >= -1/2.
inline double lanczos_sum(double z) {
    double sum = kLanczosCoeff[0];
    for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) {
        sum += kLanczosCoeff[i] / (z + static_cast<double>(i));
    }
    return sum;
}

inline void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be a finite positive real, got " +
                          std::to_string(x));
    }
}

} // namespace detail

/// Gamma function for x > 0. Arguments below 1/2 are shifted up by the
/// recurrence Gamma(x) = Gamma(x + 1) / x, so no reflection is needed.
inline double gamma(double x) {
    detail::require_positive(x, "gamma");
    if (x < 0.5) return gamma(x + 1.0) / x;
    const double z = x - 1.0;
    const double t = z + detail::kLanczosG + 0.5;
    // Split the power so that t^(z+1/2) e^-t does not overflow before x ~ 171.
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * detail::lanczos_sum(z);
}

/// Natural logarithm of Gamma for x > 0, evaluated without forming Gamma(x).
inline double ln_gamma(double x) {
    detail::require_positive(x, "ln_gamma");
    if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
    const double z = x - 1.0;
    const double t = z + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(z));
}

struct HypergeometricParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;

    void validate() const {
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) {
            throw DomainError("hyp2f1: parameters a, b, c must be positive");
        }
    }

    /// Sufficient condition for 1/F to be concave on (0,1):
    /// a + b >= c > 2ab and c >= a + b - 1/2.
    [[nodiscard]] bool reciprocal_concavity_hypothesis() const {
        return a + b >= c && c > 2.0 * a * b && c >= a + b - 0.5;
    }

    friend bool operator==(const HypergeometricParams&, const HypergeometricParams&) = default;
};

inline constexpr int kHyp2f1MaxTerms = 10000;

/// Gauss hypergeometric 2F1(a, b; c; x) by direct summation of its power
/// series, for |x| < 1. Summation stops once a term drops below 1e-15 of the
/// partial sum while the term ratio is already contracting.
inline double hyp2f1(const HypergeometricParams& p, double x) {
    p.validate();
    if (!(std::abs(x) < 1.0)) {
        throw DomainError("hyp2f1: series requires |x| < 1, got " + std::to_string(x));
    }
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < kHyp2f1MaxTerms; ++n) {
        const double dn = n;
        const double ratio = (p.a + dn) * (p.b + dn) / ((p.c + dn) * (dn + 1.0)) * x;
        term *= ratio;
        sum += term;
        if (std::abs(term) < 1e-15 * std::abs(sum) && std::abs(ratio) < 1.0) return sum;
    }
    throw ConvergenceError("hyp2f1: series did not converge within " +
                           std::to_string(kHyp2f1MaxTerms) + " terms at x = " + std::to_string(x));
}

/// ln V_alpha(p) = alpha ln 2 + alpha ln Gamma(1 + 1/p) - ln Gamma(1 + alpha/p).
inline double ln_lp_ball_volume(double alpha, double p) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        throw DomainError("lp_ball_volume: alpha must be > 1");
    }
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw DomainError("lp_ball_volume: p must be > 0");
    }
    return alpha * std::numbers::ln2 + alpha * ln_gamma(1.0 + 1.0 / p) - ln_gamma(1.0 + alpha / p);
}

/// Volume of the unit ball of the p-norm in dimension alpha,
/// 2^alpha Gamma(1 + 1/p)^alpha / Gamma(1 + alpha/p).
inline double lp_ball_volume(double alpha, double p) {
    return std::exp(ln_lp_ball_volume(alpha, p));
}

} // namespace popcheck::specfun
