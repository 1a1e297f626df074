#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace frailsurv {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.141592653589793;

/// log(1 - exp(u)) for u <= 0, stable near both ends.
/// Split at -ln2 following Maechler (2012).
inline double log1mexp(double u) {
    if (u > 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (u == 0.0) return kNegInf;
    if (u > -0.6931471805599453) return std::log(-std::expm1(u));
    return std::log1p(-std::exp(u));
}

/// log(1 + exp(x)) without overflow.
inline double log1pexp(double x) {
    if (x > 700.0) return x;
    if (x > 37.0) return x + std::exp(-x);
    if (x > -37.0) return std::log1p(std::exp(x));
    return std::exp(x);
}

/// log(e^a + e^b), -inf inputs allowed.
inline double logsumexp2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-(std::abs(a - b))));
}

/// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865476);
}

/// Two-sided normal tail probability, clamped away from exact zero so the
/// value stays usable as a p-value.
inline double two_sided_normal_p(double z) {
    const double p = std::erfc(std::abs(z) * 0.7071067811865476);
    return p < 1e-300 ? 1e-300 : p;
}

/// log density of Gamma(shape a, rate b) at x > 0; -inf for x <= 0.
inline double gamma_log_pdf(double x, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("gamma_log_pdf: shape and rate must be positive");
    if (!(x > 0.0)) return kNegInf;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

/// log density of Normal(mean, variance) at x.
inline double normal_log_pdf(double x, double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("normal_log_pdf: variance must be positive");
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * kPi * variance) + d * d / variance);
}

inline bool is_finite(double x) { return std::isfinite(x); }

}  // namespace frailsurv
