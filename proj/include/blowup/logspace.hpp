#pragma once

// Log-space arithmetic. The stepwise construction lives at magnitudes like
// u_i = e^{-e^{i^2}}, far below any direct double representation, so all of
// its bookkeeping is done on logarithms with the helpers below.

#include <cmath>
#include <limits>
#include <span>

#include "blowup/errors.hpp"

namespace blowup {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(e^a + e^b), safe for any magnitudes.
inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-(std::fabs(a - b))));
}

/// log(sum_i e^{x_i}) with max factoring.
inline double log_sum_exp(std::span<const double> xs) {
    double m = kNegInf;
    for (double x : xs)
        if (x > m) m = x;
    if (m == kNegInf || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

/// log(e^x - 1) for x > 0.
inline double log_expm1(double x) {
    if (x <= 0) throw LogDomainError("log_expm1: argument must be positive");
    if (x > 36.8) return x;  // e^{-x} below double epsilon of the log
    return std::log(std::expm1(x));
}

/// log(e^a - e^b) for a > b. Throws LogDomainError when the difference
/// underflows to a non-positive argument (a <= b), which signals
/// interval-boundary rounding at call sites.
inline double log_diff_exp(double a, double b) {
    if (b == kNegInf) return a;
    const double d = a - b;
    if (d <= 0) throw LogDomainError("log_diff_exp: e^a - e^b is not positive");
    return b + log_expm1(d);
}

/// log(1 - e^{-x}) for x > 0.
inline double log1m_exp_neg(double x) {
    if (x <= 0) throw LogDomainError("log1m_exp_neg: argument must be positive");
    if (x < 0.6931471805599453) return std::log(-std::expm1(-x));
    return std::log1p(-std::exp(-x));
}

}  // namespace blowup
