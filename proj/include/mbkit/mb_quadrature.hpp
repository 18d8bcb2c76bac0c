#pragma once

// Integrals over the real line t of products of Gamma(a + s i t), complex
// powers z^(w0 + i w1 t) and an optional declared analytic factor.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mbkit/complex_gamma.hpp"
#include "mbkit/errors.hpp"
#include "mbkit/quadrature.hpp"

namespace mbkit {

enum class ConvergenceClass { absolute_exponential, absolute_polynomial, conditional };

inline std::string_view to_string(ConvergenceClass c) {
    switch (c) {
        case ConvergenceClass::absolute_exponential:
            return "absolute-exponential";
        case ConvergenceClass::absolute_polynomial:
            return "absolute-polynomial";
        case ConvergenceClass::conditional:
            return "conditional";
    }
    return "unknown";
}

enum class FactorPosition { numerator, denominator };

/// Gamma(offset + slope * i t), in the numerator or the denominator.
struct GammaFactor {
    ComplexValue offset;
    double slope = 1.0;
    FactorPosition position = FactorPosition::numerator;
};

/// base^(w0 + i w1 t) = exp((w0 + i w1 t) log base), principal log.
struct PowerFactor {
    ComplexValue base;
    ComplexValue w0;
    double w1 = 0.0;
};

/// Analytic factor given through its logarithm, which must be continuous
/// in t. The modulus is declared to satisfy
/// |e(t)| <= constant |t|^power exp(-rate |t|) for |t| >= 1 on each side.
struct ExtraFactor {
    std::function<ComplexValue(double)> log_evaluator;
    double rate_plus = 0.0;
    double rate_minus = 0.0;
    double power_plus = 0.0;
    double power_minus = 0.0;
    double frequency = 0.0;  // bound on |d/dt arg e(t)|
    double constant = 1.0;
};

/// Builds an ExtraFactor, fitting the constant on |t| in [1, 100] and
/// checking the declared decay on |t| in [100, 1000].
inline ExtraFactor make_extra_factor(std::function<ComplexValue(double)> log_evaluator, double rate_plus,
                                     double rate_minus, double power_plus, double power_minus,
                                     double frequency) {
    ExtraFactor e{std::move(log_evaluator), rate_plus, rate_minus, power_plus, power_minus, frequency, 1.0};
    auto log_ratio = [&](double t) {
        const double at = std::abs(t);
        const double rate = t > 0 ? rate_plus : rate_minus;
        const double power = t > 0 ? power_plus : power_minus;
        return e.log_evaluator(t).real() - power * std::log(at) + rate * at;
    };
    double fitted = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i) {
        const double t = std::pow(10.0, 2.0 * i / 100.0);
        fitted = std::max({fitted, log_ratio(t), log_ratio(-t)});
    }
    const double log_c = fitted + std::log(kCalibrationSafety);
    for (int i = 0; i <= 50; ++i) {
        const double t = std::pow(10.0, 2.0 + i / 50.0);
        if (log_ratio(t) > log_c || log_ratio(-t) > log_c)
            throw domain_error("extra factor violates its declared decay");
    }
    e.constant = std::exp(log_c);
    return e;
}

class MBIntegrand {
public:
    MBIntegrand() = default;
    MBIntegrand(ComplexValue prefactor, std::vector<GammaFactor> gammas, std::vector<PowerFactor> powers,
                std::optional<ExtraFactor> extra = std::nullopt)
        : prefactor_(prefactor), gammas_(std::move(gammas)), powers_(std::move(powers)), extra_(std::move(extra)) {
        if (!is_finite(prefactor_)) throw domain_error("MBIntegrand: non-finite prefactor");
        for (const auto& g : gammas_) {
            if (g.slope == 0.0 || !std::isfinite(g.slope)) throw domain_error("MBIntegrand: gamma slope must be non-zero");
            if (!is_finite(g.offset)) throw domain_error("MBIntegrand: non-finite gamma offset");
            if (g.position == FactorPosition::numerator && !(g.offset.real() > 0.0))
                throw domain_error("MBIntegrand: numerator gamma needs Re(offset) > 0");
        }
        for (const auto& p : powers_) {
            if (std::abs(p.base) == 0.0 || (p.base.imag() == 0.0 && p.base.real() < 0.0))
                throw domain_error("MBIntegrand: power base on the branch cut");
            if (!is_finite(p.w0) || !std::isfinite(p.w1)) throw domain_error("MBIntegrand: non-finite exponent");
        }
        if (extra_ && !extra_->log_evaluator) throw domain_error("MBIntegrand: empty extra factor");
        pair_factors();
    }

    [[nodiscard]] ComplexValue prefactor() const { return prefactor_; }
    [[nodiscard]] const std::vector<GammaFactor>& gamma_factors() const { return gammas_; }
    [[nodiscard]] const std::vector<PowerFactor>& power_factors() const { return powers_; }
    [[nodiscard]] const std::optional<ExtraFactor>& extra() const { return extra_; }

    [[nodiscard]] MBIntegrand scaled(ComplexValue alpha) const {
        MBIntegrand out = *this;
        out.prefactor_ *= alpha;
        return out;
    }

    /// Log of the integrand without the prefactor. The imaginary part is the
    /// continuous phase; real part -inf where a denominator gamma has a pole.
    [[nodiscard]] ComplexValue log_kernel(double t) const {
        ComplexValue s = 0.0;
        for (const auto& [num, den] : pairs_) {
            const auto& a = gammas_[num];
            const auto& b = gammas_[den];
            if (near_gamma_pole(at(b, t))) return {-std::numeric_limits<double>::infinity(), 0.0};
            s += log_gamma_ratio(ComplexValue(0.0, a.slope * t), a.offset, b.offset);
        }
        for (std::size_t i : single_num_) s += log_gamma(at(gammas_[i], t));
        for (std::size_t i : single_den_) {
            const ComplexValue z = at(gammas_[i], t);
            if (near_gamma_pole(z)) return {-std::numeric_limits<double>::infinity(), 0.0};
            s -= log_gamma(z);
        }
        for (const auto& p : powers_) s += (p.w0 + ComplexValue(0.0, p.w1 * t)) * std::log(p.base);
        if (extra_) s += extra_->log_evaluator(t);
        return s;
    }

    /// Integrand without the prefactor.
    [[nodiscard]] ComplexValue kernel(double t) const {
        const ComplexValue l = log_kernel(t);
        if (l.real() == -std::numeric_limits<double>::infinity()) return 0.0;
        return std::exp(l);
    }

    [[nodiscard]] ComplexValue operator()(double t) const { return prefactor_ * kernel(t); }

    /// Local oscillation frequency estimate used to size initial panels.
    [[nodiscard]] double frequency(double t) const {
        double w = 0.0;
        for (const auto& p : powers_) w += p.w1 * std::log(std::abs(p.base));
        double slope_sum = 0.0;
        for (const auto& g : gammas_)
            slope_sum += g.position == FactorPosition::numerator ? g.slope : -g.slope;
        double f = std::abs(w) + std::abs(slope_sum) * std::log1p(std::abs(t));
        if (extra_) f += extra_->frequency;
        return f;
    }

private:
    static ComplexValue at(const GammaFactor& g, double t) { return g.offset + ComplexValue(0.0, g.slope * t); }

    // Numerator/denominator factors with equal slopes are evaluated as one
    // ratio so the t log t growth cancels analytically.
    void pair_factors() {
        std::vector<bool> used(gammas_.size(), false);
        for (std::size_t d = 0; d < gammas_.size(); ++d) {
            if (gammas_[d].position != FactorPosition::denominator) continue;
            for (std::size_t n = 0; n < gammas_.size(); ++n) {
                if (used[n] || gammas_[n].position != FactorPosition::numerator) continue;
                if (gammas_[n].slope != gammas_[d].slope) continue;
                used[n] = used[d] = true;
                pairs_.emplace_back(n, d);
                break;
            }
        }
        for (std::size_t i = 0; i < gammas_.size(); ++i) {
            if (used[i]) continue;
            (gammas_[i].position == FactorPosition::numerator ? single_num_ : single_den_).push_back(i);
        }
    }

    ComplexValue prefactor_ = 1.0;
    std::vector<GammaFactor> gammas_;
    std::vector<PowerFactor> powers_;
    std::optional<ExtraFactor> extra_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::size_t> single_num_, single_den_;
};

struct DecayProfile {
    double rate_plus = 0.0;
    double rate_minus = 0.0;
    double power_plus = 0.0;
    double power_minus = 0.0;
    ConvergenceClass cls = ConvergenceClass::conditional;
};

struct QuadResult {
    ComplexValue value;
    double error_estimate = 0.0;
    double truncation_T = 0.0;
    long evaluations = 0;
    ConvergenceClass class_used = ConvergenceClass::absolute_exponential;
};

struct RegularizationSchedule {
    double eps0 = 1e-3;
    double ratio = 0.25;
    int steps = 5;
};

inline constexpr long kEvaluationBudget = 2'000'000;
inline constexpr double kRateZero = 1e-12;

namespace detail {
inline ConvergenceClass side_class(double rate, double power) {
    if (rate > kRateZero) return ConvergenceClass::absolute_exponential;
    if (std::abs(rate) <= kRateZero && power < -1.0) return ConvergenceClass::absolute_polynomial;
    return ConvergenceClass::conditional;
}
}  // namespace detail

/// Envelope |f(t)| ~ |t|^power exp(-rate |t|) on each side, from the
/// Stirling decay of every factor.
inline DecayProfile decay_profile(const MBIntegrand& f) {
    using std::numbers::pi;
    DecayProfile d;
    double rate = 0.0, power = 0.0;
    for (const auto& g : f.gamma_factors()) {
        const double sign = g.position == FactorPosition::numerator ? 1.0 : -1.0;
        rate += sign * 0.5 * pi * std::abs(g.slope);
        power += sign * (g.offset.real() - 0.5);
    }
    double arg_term = 0.0;
    for (const auto& p : f.power_factors()) arg_term += p.w1 * std::arg(p.base);
    d.rate_plus = rate + arg_term;
    d.rate_minus = rate - arg_term;
    d.power_plus = d.power_minus = power;
    if (const auto& e = f.extra()) {
        d.rate_plus += e->rate_plus;
        d.rate_minus += e->rate_minus;
        d.power_plus += e->power_plus;
        d.power_minus += e->power_minus;
    }
    const auto a = detail::side_class(d.rate_plus, d.power_plus);
    const auto b = detail::side_class(d.rate_minus, d.power_minus);
    d.cls = static_cast<ConvergenceClass>(std::max(static_cast<int>(a), static_cast<int>(b)));
    return d;
}

namespace detail {
// max (or min) over |t| in [T0, 10 T0], both signs, of
// |Gamma(a + s i t)| / (|t|^(Re a - 1/2) exp(-pi |s| |t| / 2)), as a log.
inline double log_gamma_factor_ratio(const GammaFactor& g, double T0, bool upper) {
    double best = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCalibrationPoints; ++i) {
        const double t = T0 * std::pow(10.0, static_cast<double>(i) / (kCalibrationPoints - 1));
        for (double s : {t, -t}) {
            const double lg = log_gamma(g.offset + ComplexValue(0.0, g.slope * s)).real();
            const double env = (g.offset.real() - 0.5) * std::log(t) - 0.5 * std::numbers::pi * std::abs(g.slope) * t;
            best = upper ? std::max(best, lg - env) : std::min(best, lg - env);
        }
    }
    return best;
}

inline double calibration_start(const MBIntegrand& f) {
    double T0 = 2.0;
    for (const auto& g : f.gamma_factors()) T0 = std::max(T0, 2.0 + 2.0 * std::abs(g.offset) / std::abs(g.slope));
    return T0;
}
}  // namespace detail

/// Constant K in |kernel(t)| <= K |t|^power exp(-rate |t|): calibrated upper
/// constants of numerator gammas over lower constants of denominator gammas,
/// times the power-factor moduli and the extra-factor constant. Excludes the
/// prefactor.
inline double bound_constant(const MBIntegrand& f) {
    const double T0 = detail::calibration_start(f);
    double log_k = 0.0;
    for (const auto& g : f.gamma_factors()) {
        if (g.position == FactorPosition::numerator)
            log_k += detail::log_gamma_factor_ratio(g, T0, true) + std::log(kCalibrationSafety);
        else
            log_k -= detail::log_gamma_factor_ratio(g, T0, false) - std::log(kCalibrationSafety);
    }
    for (const auto& p : f.power_factors()) log_k += (p.w0 * std::log(p.base)).real();
    if (f.extra()) log_k += std::log(f.extra()->constant);
    return std::exp(log_k);
}

namespace detail {
// Smallest integer T >= 2 with tail(T) < target; tail must be decreasing.
template <typename Tail>
double smallest_integer_point(Tail&& tail, double target) {
    double hi = 2.0;
    while (!(tail(hi) < target)) {
        hi *= 2.0;
        if (hi > 1e15) throw budget_error("truncation point beyond any feasible range");
    }
    if (hi == 2.0) return hi;
    double lo = hi / 2.0;  // tail(lo) >= target
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        if (tail(mid) < target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline double side_tail(double rate, double power, double K, double T) {
    if (rate > kRateZero) return K * std::exp(power * std::log(T) - rate * T) / rate;
    return K * std::pow(T, power + 1.0) / std::abs(power + 1.0);
}
}  // namespace detail

/// Smallest integer T >= 2 such that the analytic tail bound on each side is
/// below tol / 2.
inline double truncation_point(const DecayProfile& profile, double K_total, double tol) {
    if (profile.cls == ConvergenceClass::conditional)
        throw unbounded_tail_error("truncation_point: conditionally convergent integrand has no tail bound");
    if (!(tol > 0.0)) throw domain_error("truncation_point: tol must be positive");
    if (!(K_total > 0.0) || !std::isfinite(K_total)) throw domain_error("truncation_point: K_total must be positive");
    double T = 2.0;
    for (auto [rate, power] : {std::pair{profile.rate_plus, profile.power_plus},
                               std::pair{profile.rate_minus, profile.power_minus}}) {
        T = std::max(T, detail::smallest_integer_point(
                            [&](double x) { return detail::side_tail(rate, power, K_total, x); }, 0.5 * tol));
    }
    return T;
}

namespace detail {

// Adaptive panels on [a, b]; initial widths <= pi / (1 + frequency).
template <typename G, typename Freq>
quad::Estimate<ComplexValue> integrate_panels(const G& g, const Freq& freq, double a, double b, double tol,
                                              long budget) {
    using std::numbers::pi;
    std::vector<double> edges{a};
    double x = a;
    while (x < b) {
        double w = pi / (1.0 + freq(x));
        w = std::min(w, pi / (1.0 + freq(std::min(b, x + w))));
        x = (b - x < 1.5 * w) ? b : x + w;
        edges.push_back(x);
    }
    std::vector<ComplexValue> values;
    values.reserve(edges.size());
    quad::Estimate<ComplexValue> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double len = edges[i + 1] - edges[i];
        auto e = quad::adaptive_gk<ComplexValue>(g, edges[i], edges[i + 1], tol * len / (b - a),
                                                 budget - out.evaluations, 40, 1e-14);
        out.evaluations += e.evaluations;
        out.error += e.error;
        out.l1 += e.l1;
        values.push_back(e.value);
    }
    out.value = quad::pairwise_sum<ComplexValue>(values);
    return out;
}

}  // namespace detail

/// Integral of f over [-T, T].
inline QuadResult integrate_truncated(const MBIntegrand& f, double T, double tol) {
    if (!(T > 0.0)) throw domain_error("integrate_truncated: T must be positive");
    if (!(tol > 0.0)) throw domain_error("integrate_truncated: tol must be positive");
    const double scale = std::max(std::abs(f.prefactor()), std::numeric_limits<double>::min());
    auto e = detail::integrate_panels([&](double t) { return f.kernel(t); },
                                      [&](double t) { return f.frequency(t); }, -T, T, tol / scale,
                                      kEvaluationBudget);
    QuadResult r;
    r.value = f.prefactor() * e.value;
    r.error_estimate = scale * e.error;
    r.truncation_T = T;
    r.evaluations = e.evaluations;
    r.class_used = decay_profile(f).cls;
    return r;
}

namespace detail {

// One tail of an absolutely-polynomial integrand: the integral over
// sign * [start, inf), as Wynn-accelerated partial sums over intervals that
// span half a period of the phase, or double in length when the phase is
// flat.
inline quad::Estimate<ComplexValue> polynomial_tail(const MBIntegrand& f, double sign, double start, double tol,
                                                    long budget, double& reach) {
    using std::numbers::pi;
    auto g = [&](double s) { return f.kernel(sign * s); };
    auto phase_rate = [&](double s) {
        const double h = 1e-4 * std::max(1.0, s);
        return std::abs(f.log_kernel(sign * (s + h)).imag() - f.log_kernel(sign * (s - h)).imag()) / (2.0 * h);
    };
    quad::EpsilonTable<ComplexValue> table;
    quad::Estimate<ComplexValue> out;
    ComplexValue partial = 0.0;
    double s = start;
    int settled = 0;
    constexpr int kMaxTerms = 400;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double len = std::min(s, pi / std::max(phase_rate(s), 1e-300));
        auto e = quad::adaptive_gk<ComplexValue>(g, s, s + len, 0.01 * tol, budget - out.evaluations, 40, 1e-14);
        out.evaluations += e.evaluations;
        out.l1 += e.l1;
        out.error += e.error;
        partial += e.value;
        s += len;
        table.push(partial);
        if (k >= 6 && table.error() < 0.5 * tol) {
            if (++settled >= 2) break;
        } else {
            settled = 0;
        }
        if (k == kMaxTerms - 1) throw convergence_error("polynomial tail acceleration did not settle");
    }
    reach = s;
    out.value = table.estimate();
    out.error += table.error();
    return out;
}

inline QuadResult integrate_polynomial(const MBIntegrand& f, double tol) {
    const double scale = std::max(std::abs(f.prefactor()), std::numeric_limits<double>::min());
    const double inner_tol = tol / scale;
    double T = 32.0;
    for (const auto& g : f.gamma_factors()) T = std::max(T, 4.0 * std::abs(g.offset) / std::abs(g.slope));
    auto centre = integrate_panels([&](double t) { return f.kernel(t); }, [&](double t) { return f.frequency(t); },
                                   -T, T, inner_tol / 3.0, kEvaluationBudget);
    long used = centre.evaluations;
    double reach_plus = T, reach_minus = T;
    auto plus = polynomial_tail(f, 1.0, T, inner_tol / 3.0, kEvaluationBudget - used, reach_plus);
    used += plus.evaluations;
    auto minus = polynomial_tail(f, -1.0, T, inner_tol / 3.0, kEvaluationBudget - used, reach_minus);
    used += minus.evaluations;
    QuadResult r;
    const std::vector<ComplexValue> parts{minus.value, centre.value, plus.value};
    r.value = f.prefactor() * quad::pairwise_sum<ComplexValue>(parts);
    r.error_estimate = scale * (centre.error + plus.error + minus.error);
    r.truncation_T = std::max(reach_plus, reach_minus);
    r.evaluations = used;
    r.class_used = ConvergenceClass::absolute_polynomial;
    return r;
}

}  // namespace detail

/// Integral of f * exp(-eps t^2) extrapolated to eps -> 0.
inline QuadResult integrate_regularized(const MBIntegrand& f, double tol, const RegularizationSchedule& schedule) {
    if (!(tol > 0.0)) throw domain_error("integrate_regularized: tol must be positive");
    if (!(schedule.eps0 > 0.0) || !(schedule.ratio > 0.0 && schedule.ratio < 1.0) || schedule.steps < 3)
        throw domain_error("integrate_regularized: invalid schedule");
    const DecayProfile profile = decay_profile(f);
    for (auto [rate, power] : {std::pair{profile.rate_plus, profile.power_plus},
                               std::pair{profile.rate_minus, profile.power_minus}}) {
        if (rate < -kRateZero) throw domain_error("integrate_regularized: integrand grows exponentially");
    }
    const double scale = std::max(std::abs(f.prefactor()), std::numeric_limits<double>::min());
    const double inner_tol = tol / scale;
    const double K = bound_constant(f);
    std::vector<ComplexValue> levels;
    QuadResult r;
    r.class_used = ConvergenceClass::conditional;
    double eps = schedule.eps0;
    double level_error = 0.0;
    for (int k = 0; k < schedule.steps; ++k, eps *= schedule.ratio) {
        const double level_tol = 0.1 * inner_tol;
        double T = 2.0;
        for (auto [rate, power] : {std::pair{profile.rate_plus, profile.power_plus},
                                   std::pair{profile.rate_minus, profile.power_minus}}) {
            const double rr = std::max(rate, 0.0);
            const double pp = std::max(power, -1.0);
            if (power > 0.0 && rr == 0.0 && !(f.frequency(1e6) > f.frequency(1e3)))
                throw domain_error("integrate_regularized: growing integrand without increasing oscillation");
            auto tail = [&](double x) {
                return K * std::exp(pp * std::log(x) - rr * x - eps * x * x) / (2.0 * eps * x + rr);
            };
            T = std::max(T, detail::smallest_integer_point(tail, 0.5 * level_tol));
        }
        auto e = detail::integrate_panels(
            [&](double t) { return f.kernel(t) * std::exp(-eps * t * t); },
            [&](double t) { return f.frequency(t); }, -T, T, level_tol, kEvaluationBudget - r.evaluations);
        r.evaluations += e.evaluations;
        r.truncation_T = T;
        level_error = e.error;
        levels.push_back(e.value);
    }
    // Leading order in eps from the last three levels, snapped to an integer.
    double order = 1.0;
    const std::size_t n = levels.size();
    const double d1 = std::abs(levels[n - 2] - levels[n - 3]);
    const double d2 = std::abs(levels[n - 1] - levels[n - 2]);
    if (d1 > 0.0 && d2 > 0.0) {
        const double est = std::log(d1 / d2) / std::log(1.0 / schedule.ratio);
        if (std::isfinite(est) && est >= 0.5) {
            const double snapped = std::round(est);
            order = std::abs(est - snapped) < 0.3 ? snapped : est;
        }
    }
    const auto rich = quad::richardson<ComplexValue>(levels, schedule.ratio, order);
    const auto& dg = rich.diagonal;
    const double last = std::abs(dg[n - 1] - dg[n - 2]);
    const double prev = std::abs(dg[n - 2] - dg[n - 3]);
    if (last > prev && last > inner_tol)
        throw convergence_error("integrate_regularized: extrapolants do not contract");
    r.value = f.prefactor() * rich.value;
    r.error_estimate = scale * (last + level_error);
    return r;
}

/// Dispatch on the decay class: truncation for exponential decay,
/// accelerated tails for polynomial decay, regularization otherwise.
inline QuadResult integrate_line(const MBIntegrand& f, double tol,
                                 const RegularizationSchedule& schedule = RegularizationSchedule{}) {
    if (!(tol > 0.0)) throw domain_error("integrate_line: tol must be positive");
    const DecayProfile profile = decay_profile(f);
    switch (profile.cls) {
        case ConvergenceClass::absolute_exponential: {
            const double scale = std::max(std::abs(f.prefactor()), std::numeric_limits<double>::min());
            const double T = truncation_point(profile, bound_constant(f), tol / scale);
            auto r = integrate_truncated(f, T, tol);
            r.class_used = ConvergenceClass::absolute_exponential;
            return r;
        }
        case ConvergenceClass::absolute_polynomial:
            return detail::integrate_polynomial(f, tol);
        case ConvergenceClass::conditional:
            return integrate_regularized(f, tol, schedule);
    }
    throw domain_error("integrate_line: unknown class");
}

}  // namespace mbkit
