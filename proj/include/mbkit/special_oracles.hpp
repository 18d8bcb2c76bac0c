#pragma once

// Independent evaluators built on one-dimensional real integrals: Kummer,
// Gauss, Bessel J/I/K and the related Hecke and cosh transforms.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "mbkit/complex_gamma.hpp"
#include "mbkit/errors.hpp"
#include "mbkit/quadrature.hpp"

namespace mbkit {

using OracleDomain = quad::Domain;

/// integrand(u) on the domain; endpoint_integrand(u, u - a, b - u), when
/// set, is used instead so endpoint factors keep full relative accuracy.
struct RealLineIntegralSpec {
    std::function<ComplexValue(double)> integrand;
    OracleDomain domain = OracleDomain::unit_interval;
    double tol = 1e-12;
    std::function<ComplexValue(double, double, double)> endpoint_integrand;
};

inline ComplexValue oracle_integrate(const RealLineIntegralSpec& spec) {
    if (!(spec.tol > 0.0)) throw domain_error("oracle_integrate: tol must be positive");
    quad::DEOptions opt;
    opt.abs_tol = spec.tol;
    opt.rel_tol = 0.0;
    if (spec.endpoint_integrand) {
        const auto& g = spec.endpoint_integrand;
        return quad::de_integrate<ComplexValue>([&](double u, double l, double r) { return g(u, l, r); },
                                                spec.domain, opt)
            .value;
    }
    if (!spec.integrand) throw domain_error("oracle_integrate: no integrand");
    return quad::de_integrate<ComplexValue>(spec.integrand, spec.domain, opt).value;
}

namespace detail {

inline constexpr double kOracleRelTol = 1e-14;

// Relative-accuracy integration for the named oracles.
template <typename T, typename F>
T oracle_rel(F&& f, OracleDomain d) {
    quad::DEOptions opt;
    opt.rel_tol = kOracleRelTol;
    return quad::de_integrate<T>(std::forward<F>(f), d, opt).value;
}

// log cosh(x) without overflow
inline double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

}  // namespace detail

/// sqrt(pi) Gamma(a) Gamma(a + 1/2) sech(xi / 2)^(2a)
inline ComplexValue sech_power_rhs(const ComplexValue& a, double xi) {
    if (!(a.real() > 0.0)) throw domain_error("sech_power_rhs: requires Re a > 0");
    const double half_log_pi = 0.5 * std::log(std::numbers::pi);
    return std::exp(half_log_pi + log_gamma(a) + log_gamma(a + 0.5) - 2.0 * a * detail::log_cosh(0.5 * xi));
}

/// 1F1(a; b; x) from the Euler integral over (0, 1).
inline ComplexValue kummer_m(const ComplexValue& a, const ComplexValue& b, double x) {
    if (!(b.real() > a.real() && a.real() > 0.0)) throw domain_error("kummer_m: requires Re b > Re a > 0");
    const ComplexValue ba = b - a;
    auto f = [&](double t, double l, double r) { return std::exp(x * t + (a - 1.0) * std::log(l) + (ba - 1.0) * std::log(r)); };
    const ComplexValue I = detail::oracle_rel<ComplexValue>(f, OracleDomain::unit_interval);
    return std::exp(log_gamma(b) - log_gamma(ba) - log_gamma(a)) * I;
}

/// U(a, b, x) from the Laplace-type integral over (0, inf).
inline ComplexValue kummer_u(const ComplexValue& a, const ComplexValue& b, double x) {
    if (!(a.real() > 0.0) || !(x > 0.0)) throw domain_error("kummer_u: requires Re a > 0 and x > 0");
    auto f = [&](double t) { return std::exp(-x * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t)); };
    return std::exp(-log_gamma(a)) * detail::oracle_rel<ComplexValue>(f, OracleDomain::half_line);
}

/// 2F1(a, b; c; z) for z < 1 from the Euler integral.
inline ComplexValue gauss_2f1(const ComplexValue& a, const ComplexValue& b, const ComplexValue& c, double z) {
    if (!(c.real() > a.real() && a.real() > 0.0) || !(z < 1.0))
        throw domain_error("gauss_2f1: requires Re c > Re a > 0 and z < 1");
    auto f = [&](double s, double l, double r) {
        const double one_minus_zs = z <= 0.0 ? 1.0 - z * s : (1.0 - z) + z * r;
        return std::exp((a - 1.0) * std::log(l) + (c - a - 1.0) * std::log(r) - b * std::log(one_minus_zs));
    };
    const ComplexValue I = detail::oracle_rel<ComplexValue>(f, OracleDomain::unit_interval);
    return I / beta(a, c - a);
}

/// J_a(x) from Poisson's integral over (-1, 1).
inline ComplexValue bessel_j_poisson(const ComplexValue& a, double x) {
    if (!(a.real() > -0.5) || !(x > 0.0)) throw domain_error("bessel_j_poisson: requires Re a > -1/2 and x > 0");
    auto f = [&](double y, double l, double r) {
        return std::exp((a - 0.5) * std::log(l * r)) * std::cos(x * y);
    };
    const ComplexValue I = detail::oracle_rel<ComplexValue>(f, OracleDomain::symmetric_interval);
    return std::exp(a * std::log(0.5 * x) - 0.5 * std::log(std::numbers::pi) - log_gamma(a + 0.5)) * I;
}

/// K_p(2x) = 1/2 int_0^inf exp(-u x - x / u) u^(-p-1) du, with two_x = 2x.
inline double bessel_k(double p, double two_x) {
    if (!(two_x > 0.0) || !std::isfinite(p)) throw domain_error("bessel_k: requires two_x > 0");
    const double x = 0.5 * two_x;
    auto f = [&](double u) { return std::exp(-u * x - x / u - (p + 1.0) * std::log(u)); };
    return 0.5 * detail::oracle_rel<double>(f, OracleDomain::half_line);
}

/// I_p(2x) from the two-term integral formula; the first term vanishes for
/// integer p.
inline double bessel_i(double p, double two_x) {
    using std::numbers::pi;
    if (!(two_x > 0.0) || !std::isfinite(p)) throw domain_error("bessel_i: requires two_x > 0");
    const double x = 0.5 * two_x;
    double first = 0.0;
    if (p != std::round(p)) {
        // u = 1 + v, v in (0, inf)
        auto f = [&](double v) { return std::exp(-x * (1.0 + v) - x / (1.0 + v) - (p + 1.0) * std::log1p(v)); };
        first = -std::sin(p * pi) / pi * detail::oracle_rel<double>(f, OracleDomain::half_line);
    }
    auto g = [&](double s) { return std::cos(p * pi * s) * std::exp(two_x * std::cos(pi * s)); };
    const double second = detail::oracle_rel<double>(g, OracleDomain::unit_interval);
    return first + second;
}

/// 2 int_0^inf exp(-2x cosh u) cosh(lambda u) du
inline double cosh_transform_k(double lambda, double x) {
    if (!(x > 0.0) || !std::isfinite(lambda)) throw domain_error("cosh_transform_k: requires x > 0");
    auto f = [&](double u) {
        const double c = -2.0 * x * std::cosh(u);
        return std::exp(c + lambda * u) + std::exp(c - lambda * u);
    };
    return detail::oracle_rel<double>(f, OracleDomain::half_line);
}

/// int_0^inf exp(-p / s - q s) s^(b-a-1) ds
inline double hecke_rhs(double p, double q, double a, double b) {
    if (!(p > 0.0) || !(q > 0.0)) throw domain_error("hecke_rhs: requires p > 0 and q > 0");
    auto f = [&](double s) { return std::exp(-p / s - q * s + (b - a - 1.0) * std::log(s)); };
    return detail::oracle_rel<double>(f, OracleDomain::half_line);
}

}  // namespace mbkit
