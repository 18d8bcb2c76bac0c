#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mbkit/complex_gamma.hpp"

using mbkit::ComplexValue;
using std::numbers::pi;

namespace {

double rel(ComplexValue a, ComplexValue b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(LogGamma, Examples) {
    EXPECT_NEAR(std::abs(mbkit::log_gamma(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(mbkit::log_gamma(5.0).real(), std::log(24.0), 1e-14);
    EXPECT_NEAR(mbkit::log_gamma(0.5).real(), 0.5723649429247001, 1e-14);
    EXPECT_NEAR(mbkit::log_gamma(5.0).imag(), 0.0, 1e-15);
}

TEST(LogGamma, PolesThrow) {
    EXPECT_THROW(mbkit::log_gamma(0.0), mbkit::pole_error);
    EXPECT_THROW(mbkit::log_gamma(-3.0), mbkit::pole_error);
    EXPECT_THROW(mbkit::log_gamma(ComplexValue(-2.0, 1e-13)), mbkit::pole_error);
    EXPECT_THROW(mbkit::gamma(-1.0), mbkit::pole_error);
    EXPECT_NO_THROW(mbkit::log_gamma(ComplexValue(-2.0, 1e-9)));
}

TEST(LogGamma, MatchesLgammaOnRealAxis) {
    for (double x = 0.05; x < 150.0; x *= 1.37)
        EXPECT_NEAR(mbkit::log_gamma(x).real(), std::lgamma(x), 1e-13 * std::max(1.0, std::abs(std::lgamma(x))));
    for (double x : {-0.5, -1.5, -2.25, -7.7})
        EXPECT_NEAR(mbkit::log_gamma(x).real(), std::lgamma(x), 1e-12);
}

TEST(LogGamma, ReferenceValues) {
    // Frozen from an independent arbitrary-precision evaluation.
    const ComplexValue v1 = mbkit::log_gamma(ComplexValue(0.5, 10.0));
    EXPECT_NEAR(v1.real(), -14.789024734744293, 1e-12);
    EXPECT_NEAR(v1.imag(), 13.03002003491109, 1e-12);
    const ComplexValue v2 = mbkit::log_gamma(ComplexValue(-3.3, 2.0));
    const ComplexValue g2 = std::exp(v2);
    // Gamma(-3.3+2i) via recurrence from Gamma(0.7+2i)
    ComplexValue expect = mbkit::gamma(ComplexValue(0.7, 2.0));
    for (int k = 1; k <= 4; ++k) expect /= ComplexValue(0.7 - k, 2.0);
    EXPECT_LT(rel(g2, expect), 1e-12);
}

TEST(LogGamma, BranchContinuity) {
    // Along a vertical line the imaginary part must be continuous.
    for (double c : {-4.5, -0.3, 0.25, 3.0}) {
        double prev = mbkit::log_gamma(ComplexValue(c, 0.01)).imag();
        for (double t = 0.02; t < 80.0; t += 0.01) {
            const double cur = mbkit::log_gamma(ComplexValue(c, t)).imag();
            ASSERT_LT(std::abs(cur - prev), 0.2) << "c=" << c << " t=" << t;
            prev = cur;
        }
    }
    // Horizontal line above the cut, crossing into the left half-plane.
    double prev = mbkit::log_gamma(ComplexValue(10.0, 0.5)).imag();
    for (double x = 9.99; x > -12.0; x -= 0.01) {
        const double cur = mbkit::log_gamma(ComplexValue(x, 0.5)).imag();
        ASSERT_LT(std::abs(cur - prev), 0.2) << "x=" << x;
        prev = cur;
    }
}

TEST(LogGamma, LargeImaginaryPart) {
    // |Gamma(1/2+it)|^2 = pi / cosh(pi t)
    for (double t : {50.0, 200.0, 1000.0, -700.0}) {
        const double lhs = 2.0 * mbkit::log_gamma(ComplexValue(0.5, t)).real();
        const double rhs = std::log(pi) - pi * std::abs(t) - std::log1p(std::exp(-2.0 * pi * std::abs(t))) + std::log(2.0);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
    }
    const ComplexValue z(-20.3, 300.0);
    const ComplexValue l = mbkit::log_gamma(z);
    EXPECT_TRUE(std::isfinite(l.real()) && std::isfinite(l.imag()));
}

TEST(Gamma, Examples) {
    EXPECT_LT(std::abs(mbkit::gamma(1.0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(mbkit::gamma(4.0) - 6.0), 1e-13);
    EXPECT_NEAR(mbkit::gamma(0.5).real(), 1.7724538509055159, 1e-14);
    EXPECT_EQ(mbkit::gamma(2.5).imag(), 0.0);
    EXPECT_GT(mbkit::gamma(2.5).real(), 0.0);
}

TEST(ReciprocalGamma, Examples) {
    EXPECT_LT(std::abs(mbkit::reciprocal_gamma(1.0) - 1.0), 1e-15);
    EXPECT_EQ(mbkit::reciprocal_gamma(0.0), ComplexValue(0.0));
    EXPECT_EQ(mbkit::reciprocal_gamma(-1.0), ComplexValue(0.0));
    EXPECT_EQ(mbkit::reciprocal_gamma(-17.0), ComplexValue(0.0));
    EXPECT_NEAR(mbkit::reciprocal_gamma(-0.5).real(), -1.0 / (2.0 * std::sqrt(pi)), 1e-14);
}

TEST(Beta, Examples) {
    EXPECT_LT(std::abs(mbkit::beta(1.0, 1.0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(mbkit::beta(0.5, 0.5) - pi), 1e-13);
    EXPECT_LT(std::abs(mbkit::beta(2.0, 3.0) - 1.0 / 12.0), 1e-15);
    EXPECT_THROW(mbkit::beta(0.0, 1.0), mbkit::domain_error);
    EXPECT_THROW(mbkit::beta(ComplexValue(-0.1, 3.0), 1.0), mbkit::domain_error);
}

TEST(BetaBinet, Examples) {
    EXPECT_LT(std::abs(mbkit::beta_binet(1.0, 1.0, 1e-12) - 1.0), 1e-12);
    EXPECT_LT(std::abs(mbkit::beta_binet(2.0, 3.0, 1e-12) - 1.0 / 12.0), 1e-12);
    EXPECT_LT(std::abs(mbkit::beta_binet(0.5, 0.5, 1e-12) - pi), 1e-12);
    EXPECT_THROW(mbkit::beta_binet(-1.0, 1.0, 1e-10), mbkit::domain_error);
}

TEST(BetaBinet, AgreesWithBetaOnRandomParameters) {
    std::mt19937_64 rng(20261018);
    std::uniform_real_distribution<double> re(0.2, 5.0), im(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const ComplexValue p(re(rng), im(rng)), q(re(rng), im(rng));
        const double tol = 1e-10;
        EXPECT_LT(std::abs(mbkit::beta_binet(p, q, tol) - mbkit::beta(p, q)), tol) << p << " " << q;
    }
}

TEST(GammaIdentities, Reflection) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> re(0.0, 1.0), im(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const ComplexValue z(re(rng), im(rng));
        const ComplexValue rhs = pi / std::sin(pi * z);
        EXPECT_LT(rel(mbkit::gamma(z) * mbkit::gamma(1.0 - z), rhs), 1e-12) << z;
    }
}

TEST(GammaIdentities, DuplicationAndRecurrence) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> re(0.1, 10.0), im(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const ComplexValue a(re(rng), im(rng));
        const ComplexValue lhs = std::sqrt(pi) * mbkit::gamma(a);
        const ComplexValue rhs = std::pow(2.0, a - 1.0) * mbkit::gamma(a / 2.0) * mbkit::gamma((a + 1.0) / 2.0);
        EXPECT_LT(rel(lhs, rhs), 1e-12) << a;
        EXPECT_LT(rel(mbkit::gamma(a + 1.0), a * mbkit::gamma(a)), 1e-13) << a;
        const ComplexValue g = mbkit::gamma(a), gc = mbkit::gamma(std::conj(a));
        EXPECT_LT(std::abs(gc - std::conj(g)) / std::abs(g), 1e-14) << a;
    }
}

TEST(LogGammaRatio, MatchesDirectDifference) {
    for (double t : {10.0, 100.0, 1000.0}) {
        const ComplexValue z(0.3, t);
        const ComplexValue a(0.7, 0.2), b(1.9, -0.1);
        const ComplexValue direct = mbkit::log_gamma(z + a) - mbkit::log_gamma(z + b);
        const ComplexValue ratio = mbkit::log_gamma_ratio(z, a, b);
        ComplexValue d = direct - ratio;
        d.imag(std::remainder(d.imag(), 2.0 * pi));
        EXPECT_LT(std::abs(d), 1e-11 * std::max(1.0, std::log(t))) << t;
    }
}

TEST(MagnitudeEstimate, Examples) {
    for (double t : {1.0, 3.0, 12.0})
        EXPECT_NEAR(mbkit::gamma_magnitude_estimate(0.5, t), std::exp(-pi * t / 2.0), 1e-15);
    const double ratio = std::abs(mbkit::gamma(ComplexValue(0.5, 4.0))) / mbkit::gamma_magnitude_estimate(0.5, 4.0);
    EXPECT_NEAR(ratio, std::sqrt(2.0 * pi) / std::sqrt(1.0 + std::exp(-8.0 * pi)), 1e-12);
    EXPECT_NEAR(mbkit::gamma_magnitude_estimate(1.0, 10.0), std::sqrt(10.0) * std::exp(-5.0 * pi), 1e-20);
    EXPECT_THROW(mbkit::gamma_magnitude_estimate(1.0, 0.5), mbkit::domain_error);
}

TEST(CalibrateBound, Examples) {
    const auto m = mbkit::calibrate_bound(0.5, 2.0);
    EXPECT_GE(m.K, 2.5066);
    EXPECT_LE(m.K, 4.0 * 2.5067);
    const auto m1 = mbkit::calibrate_bound(1.0, 5.0);
    EXPECT_TRUE(std::isfinite(m1.K));
    EXPECT_GE(m1.K, std::abs(mbkit::gamma(ComplexValue(1.0, 5.0))) / mbkit::gamma_magnitude_estimate(1.0, 5.0));
    const auto m3 = mbkit::calibrate_bound(3.0, 2.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double t = 2.0 * std::pow(10.0, u(rng));
        EXPECT_LE(std::abs(mbkit::gamma(ComplexValue(3.0, t))), m3.bound(t)) << t;
        EXPECT_LE(std::abs(mbkit::gamma(ComplexValue(3.0, -t))), m3.bound(-t)) << t;
    }
    EXPECT_GE(m3.K, 1e-3);
    EXPECT_THROW(mbkit::calibrate_bound(0.5, 0.5), mbkit::domain_error);
}
