#pragma once

// Complex Gamma, log-Gamma, Beta and the vertical-line magnitude model
// |Gamma(c+it)| ~ K |t|^(c-1/2) exp(-pi|t|/2).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "mbkit/errors.hpp"
#include "mbkit/quadrature.hpp"

namespace mbkit {

using ComplexValue = std::complex<double>;

inline constexpr double kPoleTolerance = 1e-12;

inline bool is_finite(const ComplexValue& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// True when z lies within kPoleTolerance of 0, -1, -2, ...
inline bool near_gamma_pole(const ComplexValue& z) {
    if (z.real() > 0.5) return false;
    const double n = std::round(z.real());
    return n <= 0.0 && std::abs(z - ComplexValue(n, 0.0)) < kPoleTolerance;
}

namespace detail {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
inline constexpr double kLogPi = 1.1447298858494001741434273513531;

// B_{2k} / (2k (2k-1)), k = 1..8
inline constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,          1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,     1.0 / 156.0,           -3617.0 / 122400.0};

// Stirling series; requires |z| >= 10 and Re z > 0.
inline ComplexValue log_gamma_stirling(const ComplexValue& z) {
    const ComplexValue inv = 1.0 / z;
    const ComplexValue inv2 = inv * inv;
    ComplexValue series = kStirling[7];
    for (int k = 6; k >= 0; --k) series = series * inv2 + kStirling[k];
    series *= inv;
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

// Re z >= 1/2: shift upward until |z| >= 10, principal logs are continuous.
inline ComplexValue log_gamma_right(ComplexValue z) {
    ComplexValue shift_sum = 0.0;
    while (std::abs(z) < 10.0) {
        shift_sum += std::log(z);
        z += 1.0;
    }
    return log_gamma_stirling(z) - shift_sum;
}

// log sin(pi z) modulo 2 pi i, without overflow for large |Im z|.
inline ComplexValue log_sin_pi(const ComplexValue& z) {
    using std::numbers::pi;
    const double r = z.real() - 2.0 * std::round(0.5 * z.real());
    const ComplexValue w(r, z.imag());
    const ComplexValue i(0.0, 1.0);
    if (z.imag() > 5.0) {
        return -i * pi * w + std::log(1.0 - std::exp(2.0 * pi * i * w)) + std::log(ComplexValue(0.0, 0.5));
    }
    if (z.imag() < -5.0) {
        return i * pi * w + std::log(1.0 - std::exp(-2.0 * pi * i * w)) + std::log(ComplexValue(0.0, -0.5));
    }
    return std::log(std::sin(pi * w));
}

}  // namespace detail

/// Principal branch of log Gamma(z): the continuation from the positive real
/// axis, continuous on C \ (-inf, 0]. On the cut itself the value from above.
inline ComplexValue log_gamma(const ComplexValue& z) {
    using std::numbers::pi;
    if (!is_finite(z)) throw domain_error("log_gamma: non-finite argument");
    if (near_gamma_pole(z)) throw pole_error("log_gamma: argument at a pole of Gamma");
    if (z.real() >= 0.5) return detail::log_gamma_right(z);

    ComplexValue w = detail::kLogPi - detail::log_sin_pi(z) - detail::log_gamma_right(1.0 - z);
    // Fix the branch: recurrence gives the continuous imaginary part up to
    // rounding, which is enough to pick the right multiple of 2 pi.
    ComplexValue zz = z;
    double arg_sum = 0.0;
    while (zz.real() < 0.5) {
        arg_sum += std::arg(zz);
        zz += 1.0;
    }
    const double target = detail::log_gamma_right(zz).imag() - arg_sum;
    const double k = std::round((target - w.imag()) / (2.0 * pi));
    w += ComplexValue(0.0, 2.0 * pi * k);
    return w;
}

inline ComplexValue gamma(const ComplexValue& z) { return std::exp(log_gamma(z)); }

/// 1/Gamma(z), entire; exactly zero at the non-positive integers.
inline ComplexValue reciprocal_gamma(const ComplexValue& z) {
    if (near_gamma_pole(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

namespace detail {
// Bernoulli numbers B_0..B_12
inline constexpr std::array<double, 13> kBernoulli = {
    1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0,
    -691.0 / 2730.0};

inline ComplexValue bernoulli_poly(int n, const ComplexValue& x) {
    ComplexValue sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
        sum += binom * kBernoulli[j] * std::pow(x, n - j);
        binom = binom * (n - j) / (j + 1);
    }
    return sum;
}
}  // namespace detail

/// log Gamma(z + a) - log Gamma(z + b). For large |z| uses the
/// Bernoulli-polynomial expansion so the leading z log z terms never cancel.
inline ComplexValue log_gamma_ratio(const ComplexValue& z, const ComplexValue& a, const ComplexValue& b) {
    const double scale = 1.0 + std::abs(a) + std::abs(b);
    if (std::abs(z) < 60.0 * scale || (z.real() < 0.0 && std::abs(z.imag()) < 60.0 * scale))
        return log_gamma(z + a) - log_gamma(z + b);
    // log Gamma(z+a) = (z+a-1/2) log z - z + log(2pi)/2
    //                  + sum_k (-1)^(k+1) B_{k+1}(a) / (k (k+1) z^k)
    const ComplexValue logz = std::log(z);
    ComplexValue out = (a - b) * logz;
    ComplexValue zpow = 1.0;
    for (int k = 1; k <= 11; ++k) {
        zpow *= z;
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        out += sign * (detail::bernoulli_poly(k + 1, a) - detail::bernoulli_poly(k + 1, b)) /
               (static_cast<double>(k) * (k + 1) * zpow);
    }
    return out;
}

/// Gamma(p) Gamma(q) / Gamma(p + q) for Re p, Re q > 0.
inline ComplexValue beta(const ComplexValue& p, const ComplexValue& q) {
    if (!(p.real() > 0.0) || !(q.real() > 0.0)) throw domain_error("beta: requires Re p > 0 and Re q > 0");
    return std::exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q));
}

namespace detail {
// log(e^u + e^-u) without overflow
inline double log_two_cosh(double u) {
    const double a = std::abs(u);
    return a + std::log1p(std::exp(-2.0 * a));
}
}  // namespace detail

/// Beta through the full-line representation
///   B(p,q) = int (e^{(p-q)u} + e^{(q-p)u}) (e^u + e^-u)^{-p-q} du.
inline ComplexValue beta_binet(const ComplexValue& p, const ComplexValue& q, double tol) {
    if (!(p.real() > 0.0) || !(q.real() > 0.0)) throw domain_error("beta_binet: requires Re p > 0 and Re q > 0");
    const ComplexValue s = p + q;
    const ComplexValue d = p - q;
    auto f = [&](double u) {
        const double lc = detail::log_two_cosh(u);
        return std::exp(d * u - s * lc) + std::exp(-d * u - s * lc);
    };
    quad::DEOptions opt;
    opt.rel_tol = std::min(1e-13, tol);
    opt.abs_tol = 0.0;
    try {
        auto r = quad::de_integrate<ComplexValue>(f, quad::Domain::real_line, opt);
        if (r.error > tol) throw convergence_error("beta_binet: error estimate exceeds tolerance");
        return r.value;
    } catch (const convergence_error&) {
        throw convergence_error("beta_binet: quadrature did not reach the requested tolerance");
    }
}

/// Un-calibrated Stirling envelope |t|^(c-1/2) exp(-pi |t| / 2), |t| >= 1.
inline double gamma_magnitude_estimate(double c, double t) {
    if (!(std::abs(t) >= 1.0)) throw domain_error("gamma_magnitude_estimate: requires |t| >= 1");
    const double at = std::abs(t);
    return std::exp((c - 0.5) * std::log(at) - 0.5 * std::numbers::pi * at);
}

/// |Gamma(c+it)| <= K |t|^(c-1/2) exp(-pi|t|/2) for |t| >= T0.
struct GammaBoundModel {
    double c = 0.5;
    double K = 1.0;
    double T0 = 1.0;

    [[nodiscard]] double bound(double t) const { return K * gamma_magnitude_estimate(c, t); }
};

inline constexpr double kCalibrationSafety = 4.0;
inline constexpr int kCalibrationPoints = 200;

namespace detail {
// log of |Gamma(c+it)| / envelope
inline double log_envelope_ratio(double c, double t) {
    const double at = std::abs(t);
    return log_gamma(ComplexValue(c, t)).real() - ((c - 0.5) * std::log(at) - 0.5 * std::numbers::pi * at);
}
}  // namespace detail

/// K = 4 * max of the envelope ratio over a log-spaced grid |t| in [T0, 10 T0].
inline GammaBoundModel calibrate_bound(double c, double T0) {
    if (!(T0 >= 1.0)) throw domain_error("calibrate_bound: requires T0 >= 1");
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCalibrationPoints; ++i) {
        const double t = T0 * std::pow(10.0, static_cast<double>(i) / (kCalibrationPoints - 1));
        best = std::max(best, detail::log_envelope_ratio(c, t));
    }
    GammaBoundModel m;
    m.c = c;
    m.T0 = T0;
    m.K = std::max(1e-3, kCalibrationSafety * std::exp(best));
    return m;
}

/// Lower-bound counterpart used for denominator factors:
/// |Gamma(c+it)| >= k |t|^(c-1/2) exp(-pi|t|/2), k = min ratio / 4.
inline GammaBoundModel calibrate_lower_bound(double c, double T0) {
    if (!(T0 >= 1.0)) throw domain_error("calibrate_lower_bound: requires T0 >= 1");
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCalibrationPoints; ++i) {
        const double t = T0 * std::pow(10.0, static_cast<double>(i) / (kCalibrationPoints - 1));
        worst = std::min(worst, detail::log_envelope_ratio(c, t));
    }
    GammaBoundModel m;
    m.c = c;
    m.T0 = T0;
    m.K = std::exp(worst) / kCalibrationSafety;
    return m;
}

}  // namespace mbkit
