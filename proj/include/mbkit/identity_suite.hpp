#pragma once

// Catalog of Mellin-Barnes identities: each case pairs a line integral with
// an independent right-hand side over a sampled real parameter box.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "mbkit/complex_gamma.hpp"
#include "mbkit/errors.hpp"
#include "mbkit/mb_quadrature.hpp"
#include "mbkit/special_oracles.hpp"

namespace mbkit {

inline constexpr std::string_view kRngName = "mt19937_64/uniform53";
inline constexpr int kRngVersion = 1;
inline constexpr int kSampleAttemptCap = 10'000;
inline constexpr double kAbsoluteFallback = 1e-12;

/// Default relative tolerance for each convergence class.
inline double ladder_tolerance(ConvergenceClass c) {
    switch (c) {
        case ConvergenceClass::absolute_exponential:
            return 1e-8;
        case ConvergenceClass::absolute_polynomial:
            return 1e-6;
        case ConvergenceClass::conditional:
            return 1e-4;
    }
    return 1e-4;
}

/// Named parameter values in declaration order.
struct Params {
    std::vector<std::pair<std::string, double>> values;

    [[nodiscard]] double operator[](std::string_view name) const {
        for (const auto& [k, v] : values)
            if (k == name) return v;
        throw domain_error("Params: no parameter named " + std::string(name));
    }
    void set(const std::string& name, double v) {
        for (auto& [k, x] : values)
            if (k == name) {
                x = v;
                return;
            }
        values.emplace_back(name, v);
    }
    bool operator==(const Params&) const = default;
};

struct ParamRange {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
};

struct ParamConstraint {
    std::string description;
    std::function<bool(const Params&)> holds;
};

/// A parameter fixed by an equality constraint.
struct DerivedParam {
    std::string name;
    std::string description;
    std::function<double(const Params&)> solve;
};

struct ParamDomain {
    std::vector<ParamRange> ranges;
    std::vector<DerivedParam> derived;
    std::vector<ParamConstraint> constraints;

    [[nodiscard]] bool contains(const Params& p) const {
        for (const auto& c : constraints)
            if (!c.holds(p)) return false;
        return true;
    }
};

struct LhsSpec {
    MBIntegrand integrand;
    ComplexValue normalization = 1.0;
    RegularizationSchedule schedule{};
};

struct IdentityCase {
    std::string id;
    std::function<LhsSpec(const Params&)> lhs_builder;
    std::function<ComplexValue(const Params&)> rhs_evaluator;
    ParamDomain domain;
    ConvergenceClass convergence_class = ConvergenceClass::absolute_exponential;
    double tol = 1e-8;
};

struct SampleRecord {
    Params params;
    ComplexValue lhs;
    ComplexValue rhs;
    double abs_error = 0.0;
    double rel_error = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    ConvergenceClass class_used = ConvergenceClass::absolute_exponential;
    std::string failure;  // empty unless the sample threw
};

struct VerificationReport {
    std::string id;
    ConvergenceClass convergence_class = ConvergenceClass::absolute_exponential;
    double tol = 0.0;
    std::vector<SampleRecord> samples;
    double max_rel_error = 0.0;
    bool pass = false;
    double wall_time = 0.0;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform53(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

inline std::vector<Params> sample_params(const ParamDomain& domain, int n, std::uint64_t seed) {
    if (n < 1) throw domain_error("sample_params: n must be at least 1");
    std::mt19937_64 gen(seed);
    std::vector<Params> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        bool found = false;
        for (int attempt = 0; attempt < kSampleAttemptCap && !found; ++attempt) {
            Params p;
            for (const auto& r : domain.ranges) p.values.emplace_back(r.name, r.lo + (r.hi - r.lo) * uniform53(gen));
            for (const auto& d : domain.derived) p.set(d.name, d.solve(p));
            if (domain.contains(p)) {
                out.push_back(std::move(p));
                found = true;
            }
        }
        if (!found) throw infeasible_domain_error("sample_params: no admissible sample within the attempt cap");
    }
    return out;
}

namespace detail {

inline GammaFactor num(ComplexValue offset, double slope = 1.0) { return {offset, slope, FactorPosition::numerator}; }
inline GammaFactor den(ComplexValue offset, double slope = 1.0) { return {offset, slope, FactorPosition::denominator}; }
// exp(-i xi t) as e^(i w1 t)
inline PowerFactor fourier(double xi) { return {std::numbers::e, 0.0, -xi}; }
inline double lg(double x) { return log_gamma(ComplexValue(x, 0.0)).real(); }
inline constexpr double kInv2Pi = 0.5 / std::numbers::pi;

inline ParamConstraint at_least(std::string desc, std::function<double(const Params&)> g, double margin) {
    return {std::move(desc), [g = std::move(g), margin](const Params& p) { return g(p) > margin; }};
}

// Regularization start small enough that the Gaussian smearing of a
// feature at distance d is negligible.
inline RegularizationSchedule schedule_for_distance(double d) {
    RegularizationSchedule s;
    s.eps0 = std::min(1e-3, d * d / 120.0);
    return s;
}

inline std::vector<IdentityCase> make_catalog() {
    using std::numbers::pi;
    using C = ConvergenceClass;
    const double sqrt_pi = std::sqrt(pi);
    std::vector<IdentityCase> cat;
    auto add = [&](std::string id, ParamDomain dom, C cls, std::function<LhsSpec(const Params&)> lhs,
                   std::function<ComplexValue(const Params&)> rhs) {
        cat.push_back({std::move(id), std::move(lhs), std::move(rhs), std::move(dom), cls, ladder_tolerance(cls)});
    };

    add("ramanujan-3.3", {{{"a", 0.2, 3.0}, {"xi", -3.0, 3.0}}, {}, {}}, C::absolute_exponential,
        [](const Params& p) {
            const double a = p["a"];
            return LhsSpec{MBIntegrand(1.0, {num({a, 0}), num({a, 0}, -1.0)}, {fourier(p["xi"])}), 1.0};
        },
        [](const Params& p) { return sech_power_rhs(p["a"], p["xi"]); });

    add("barnes-first-3.4", {{{"a", 0.2, 2.0}, {"b", 0.2, 2.0}, {"c", 0.2, 2.0}, {"d", 0.2, 2.0}}, {}, {}},
        C::absolute_exponential,
        [](const Params& p) {
            return LhsSpec{MBIntegrand(1.0, {num(p["a"]), num(p["b"]), num(p["c"], -1.0), num(p["d"], -1.0)}, {}),
                           kInv2Pi};
        },
        [](const Params& p) {
            const double a = p["a"], b = p["b"], c = p["c"], d = p["d"];
            return ComplexValue(std::exp(lg(a + c) + lg(a + d) + lg(b + c) + lg(b + d) - lg(a + b + c + d)));
        });

    add("ramanujan-3.5", {{{"a", 0.2, 2.0}, {"b", 0.2, 2.0}}, {}, {}}, C::absolute_exponential,
        [sqrt_pi](const Params& p) {
            const double a = p["a"], b = p["b"];
            return LhsSpec{MBIntegrand(1.0, {num(a), num(a, -1.0), num(b), num(b, -1.0)}, {}), 1.0 / sqrt_pi};
        },
        [](const Params& p) {
            const double a = p["a"], b = p["b"];
            return ComplexValue(
                std::exp(lg(a) + lg(a + 0.5) + lg(b) + lg(b + 0.5) + lg(a + b) - lg(a + b + 0.5)));
        });

    add("ramanujan-ratio-3.6",
        {{{"a", 0.2, 2.0}, {"b", 0.2, 4.5}},
         {},
         {at_least("2(b-a) > 1.2", [](const Params& p) { return 2.0 * (p["b"] - p["a"]); }, 1.2)}},
        C::absolute_polynomial,
        [sqrt_pi](const Params& p) {
            const double a = p["a"], b = p["b"];
            return LhsSpec{MBIntegrand(1.0, {num(a), num(a, -1.0), den(b), den(b, -1.0)}, {}), 1.0 / sqrt_pi};
        },
        [](const Params& p) {
            const double a = p["a"], b = p["b"];
            return ComplexValue(
                std::exp(lg(a) + lg(a + 0.5) + lg(b - a - 0.5) - lg(b) - lg(b - 0.5) - lg(b - a)));
        });

    add("ratio-3.7",
        {{{"a", 0.2, 2.0}, {"b", 0.2, 4.0}, {"c", 0.2, 2.0}, {"d", 0.2, 4.0}},
         {},
         {at_least("b+d-a-c > 1.2", [](const Params& p) { return p["b"] + p["d"] - p["a"] - p["c"]; }, 1.2)}},
        C::absolute_polynomial,
        [](const Params& p) {
            return LhsSpec{MBIntegrand(1.0, {num(p["a"]), num(p["c"], -1.0), den(p["b"]), den(p["d"], -1.0)}, {}),
                           kInv2Pi};
        },
        [](const Params& p) {
            const double a = p["a"], b = p["b"], c = p["c"], d = p["d"];
            return ComplexValue(std::exp(lg(a + c) + lg(b + d - a - c - 1.0) - lg(b + d - 1.0)) *
                                reciprocal_gamma(b - a).real() * reciprocal_gamma(d - c).real());
        });

    add("gamma-ratio-ft-3.8",
        {{{"a", 0.2, 2.0}, {"delta", 0.6, 1.6}, {"xi", -3.0, 3.0}},
         {{"b", "b = a + delta", [](const Params& p) { return p["a"] + p["delta"]; }}},
         {at_least("|xi| > 0.2", [](const Params& p) { return std::abs(p["xi"]); }, 0.2)}},
        C::conditional,
        [](const Params& p) {
            return LhsSpec{MBIntegrand(1.0, {num(p["a"]), den(p["b"])}, {fourier(p["xi"])}), kInv2Pi,
                           schedule_for_distance(p["xi"])};
        },
        [](const Params& p) {
            const double a = p["a"], b = p["b"], xi = p["xi"];
            if (xi > 0.0) return ComplexValue(0.0);
            return ComplexValue(std::exp(xi * a + (b - a - 1.0) * std::log(-std::expm1(xi)) - lg(b - a)));
        });

    add("hardy-3.9i",
        {{{"p", -1.0, 1.0}, {"q", 0.5, 3.0}, {"a", -1.0, 3.0}, {"y", 0.2, 5.0}},
         {},
         {at_least("a > -p", [](const Params& p) { return p["a"] + p["p"]; }, 0.1),
          at_least("a < q - p", [](const Params& p) { return p["q"] - p["p"] - p["a"]; }, 0.1)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double a = p["a"], pp = p["p"], q = p["q"];
            return LhsSpec{MBIntegrand(1.0, {num(a + pp), num(q - pp - a, -1.0)}, {{p["y"], -a, -1.0}}), kInv2Pi};
        },
        [](const Params& p) {
            const double q = p["q"], y = p["y"];
            return ComplexValue(std::exp(lg(q) + p["p"] * std::log(y) - q * std::log1p(y)));
        });

    add("hardy-3.9ii",
        {{{"a", 0.2, 2.0}, {"q", 0.3, 1.8}, {"x", 0.1, 3.0}},
         {},
         {at_least("|log x| > 0.15", [](const Params& p) { return std::abs(std::log(p["x"])); }, 0.15)}},
        C::conditional,
        [](const Params& p) {
            const double a = p["a"], q = p["q"], x = p["x"];
            return LhsSpec{MBIntegrand(1.0, {num(a), den(a + q)}, {{x, -a, -1.0}}), kInv2Pi,
                           schedule_for_distance(std::log(x))};
        },
        [](const Params& p) {
            const double q = p["q"], x = p["x"];
            if (x > 1.0) return ComplexValue(0.0);
            return ComplexValue(std::exp((q - 1.0) * std::log1p(-x) - lg(q)));
        });

    add("kummer-m-3.10",
        {{{"a", 1.1, 3.0}, {"b", 1.1, 5.0}, {"x", 0.2, 5.0}},
         {},
         {at_least("b > a", [](const Params& p) { return p["b"] - p["a"]; }, 0.1)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double a = p["a"], b = p["b"];
            return LhsSpec{MBIntegrand(1.0, {num(1.0, -1.0), num(a - 1.0), den(b - 1.0)}, {{p["x"], -1.0, 1.0}}),
                           kInv2Pi * std::exp(lg(b) - lg(a))};
        },
        [](const Params& p) { return kummer_m(p["a"], p["b"], -p["x"]); });

    add("kummer-u-3.10",
        {{{"a", 1.1, 3.0}, {"b", -1.0, 3.0}, {"x", 0.2, 5.0}},
         {},
         {at_least("a > b", [](const Params& p) { return p["a"] - p["b"]; }, 0.1)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double a = p["a"], b = p["b"], x = p["x"];
            return LhsSpec{MBIntegrand(1.0, {num(1.0, -1.0), num(a - 1.0), num(a - b)}, {{x, 0.0, -1.0}}),
                           kInv2Pi * std::exp((1.0 - a) * std::log(x) - lg(a) - lg(1.0 + a - b))};
        },
        [](const Params& p) { return kummer_u(p["a"], p["b"], p["x"]); });

    add("gauss-3.11",
        {{{"a", 1.1, 2.5}, {"b", 1.1, 2.5}, {"c", 1.3, 5.0}, {"z", 0.1, 3.0}},
         {},
         {at_least("c > a", [](const Params& p) { return p["c"] - p["a"]; }, 0.2)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double a = p["a"], b = p["b"], c = p["c"];
            return LhsSpec{
                MBIntegrand(1.0, {num(a - 1.0), num(b - 1.0), num(1.0, -1.0), den(c - 1.0)}, {{p["z"], -1.0, 1.0}}),
                kInv2Pi * std::exp(lg(c) - lg(a) - lg(b))};
        },
        [](const Params& p) { return gauss_2f1(p["a"], p["b"], p["c"], -p["z"]); });

    add("barnes-second-3.12",
        {{{"a", 0.2, 1.5}, {"b", 0.2, 1.5}, {"c", 0.2, 1.5}, {"lambda", 0.2, 1.5}, {"mu", 0.2, 1.5}},
         {{"nu", "nu = a + b + c + lambda + mu",
           [](const Params& p) { return p["a"] + p["b"] + p["c"] + p["lambda"] + p["mu"]; }}},
         {at_least("mu > lambda", [](const Params& p) { return p["mu"] - p["lambda"]; }, 0.0)}},
        C::absolute_exponential,
        [](const Params& p) {
            return LhsSpec{MBIntegrand(1.0,
                                       {num(p["a"]), num(p["b"]), num(p["c"]), num(p["lambda"], -1.0),
                                        num(p["mu"], -1.0), den(p["nu"])},
                                       {}),
                           kInv2Pi};
        },
        [](const Params& p) {
            const double a = p["a"], b = p["b"], c = p["c"], l = p["lambda"], m = p["mu"], nu = p["nu"];
            double s = 0.0;
            for (double x : {a, b, c}) s += lg(l + x) + lg(m + x) - lg(nu - x);
            return ComplexValue(std::exp(s));
        });

    add("hecke-4.1",
        {{{"p", 0.2, 5.0}, {"q", 0.2, 5.0}, {"a", -1.0, 1.0}, {"b", -1.0, 1.0}, {"c", -0.9, 2.0}},
         {},
         {at_least("c + a > 0.1", [](const Params& p) { return p["c"] + p["a"]; }, 0.1),
          at_least("c + b > 0.1", [](const Params& p) { return p["c"] + p["b"]; }, 0.1)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double a = p["a"], b = p["b"], c = p["c"];
            return LhsSpec{MBIntegrand(1.0, {num(a + c), num(b + c)}, {{p["p"], -(a + c), -1.0}, {p["q"], -(b + c), -1.0}}),
                           kInv2Pi};
        },
        [](const Params& p) { return ComplexValue(hecke_rhs(p["p"], p["q"], p["a"], p["b"])); });

    add("hankel-4.2",
        {{{"lambda", -1.0, 2.0}, {"r", 0.1, 2.0}, {"x", 0.2, 3.0}},
         {},
         {at_least("lambda + r > 0.1", [](const Params& p) { return p["lambda"] + p["r"]; }, 0.1)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double l = p["lambda"], r = p["r"];
            return LhsSpec{MBIntegrand(1.0, {num(l + r), num(r)}, {{p["x"], -l - 2.0 * r, -2.0}}), kInv2Pi};
        },
        [](const Params& p) { return ComplexValue(cosh_transform_k(p["lambda"], p["x"])); });

    add("bessel-j-4.3",
        {{{"lambda", 0.0, 2.0}, {"r", 0.1, 0.9}, {"s", 0.2, 1.1}},
         {},
         {at_least("lambda + 2r < 2.5", [](const Params& p) { return 2.5 - p["lambda"] - 2.0 * p["r"]; }, 0.0)}},
        C::conditional,
        [](const Params& p) {
            const double l = p["lambda"], r = p["r"];
            LhsSpec out{MBIntegrand(1.0, {num(l + r), den(1.0 - r, -1.0)}, {{p["s"], -l - 2.0 * r, -2.0}}), kInv2Pi};
            out.schedule.eps0 = 4e-2;
            return out;
        },
        [](const Params& p) { return bessel_j_poisson(p["lambda"], 2.0 * p["s"]); });

    add("sonine-4.4", {{{"a", 0.6, 3.0}, {"c", 0.5, 2.0}, {"x", 0.2, 2.2}}, {}, {}}, C::absolute_polynomial,
        [](const Params& p) {
            const double a = p["a"], c = p["c"], x = p["x"];
            auto log_e = [a, c, x](double t) {
                const ComplexValue s(c, t);
                return -(a + 1.0) * std::log(s) + s - x * x / (4.0 * s);
            };
            const double freq = 1.0 + (a + 1.0) / c + x * x / (4.0 * c * c);
            return LhsSpec{MBIntegrand(1.0, {}, {}, make_extra_factor(log_e, 0.0, 0.0, -a - 1.0, -a - 1.0, freq)),
                           kInv2Pi * std::pow(0.5 * x, a)};
        },
        [](const Params& p) { return bessel_j_poisson(p["a"], p["x"]); });

    add("basset-4.5-line", {{{"p", 0.6, 3.0}, {"c", 0.5, 2.0}, {"x", 0.2, 3.0}}, {}, {}}, C::absolute_polynomial,
        [](const Params& p) {
            const double pp = p["p"], c = p["c"], x = p["x"];
            auto log_e = [pp, c, x](double t) {
                const ComplexValue s(c, t);
                return -(pp + 1.0) * std::log(s) + s + x * x / s;
            };
            const double freq = 1.0 + (pp + 1.0) / c + x * x / (c * c);
            return LhsSpec{MBIntegrand(1.0, {}, {}, make_extra_factor(log_e, 0.0, 0.0, -pp - 1.0, -pp - 1.0, freq)),
                           kInv2Pi};
        },
        [](const Params& p) { return ComplexValue(std::pow(p["x"], -p["p"]) * bessel_i(p["p"], 2.0 * p["x"])); });

    add("macdonald-4.6",
        {{{"p", -1.0, 2.0}, {"c", 0.1, 2.0}, {"x", 0.2, 3.0}},
         {},
         {at_least("c + p > 0.1", [](const Params& p) { return p["c"] + p["p"]; }, 0.1)}},
        C::absolute_exponential,
        [](const Params& p) {
            const double pp = p["p"], c = p["c"];
            return LhsSpec{MBIntegrand(1.0, {num(c), num(c + pp)}, {{p["x"], -2.0 * c, -2.0}}), kInv2Pi};
        },
        [](const Params& p) {
            const double pp = p["p"], x = p["x"];
            return ComplexValue(2.0 * std::pow(x, pp) * bessel_k(pp, 2.0 * x));
        });

    add("cahen-4.7i", {{{"c", 0.2, 2.0}, {"y", 0.2, 5.0}}, {}, {}}, C::absolute_exponential,
        [](const Params& p) {
            const double c = p["c"];
            return LhsSpec{MBIntegrand(1.0, {num(c)}, {{p["y"], -c, -1.0}}), kInv2Pi};
        },
        [](const Params& p) { return ComplexValue(std::exp(-p["y"])); });

    add("laplace-4.7ii", {{{"c", 0.5, 2.0}, {"z", 0.3, 3.0}}, {}, {}}, C::conditional,
        [](const Params& p) {
            const double c = p["c"], z = p["z"];
            auto log_e = [c, z](double t) {
                const ComplexValue s(c, t);
                return s - z * std::log(s);
            };
            return LhsSpec{MBIntegrand(1.0, {}, {}, make_extra_factor(log_e, 0.0, 0.0, -z, -z, 1.0 + z / c)),
                           kInv2Pi, schedule_for_distance(1.0)};
        },
        [](const Params& p) { return reciprocal_gamma(p["z"]); });

    add("gammaft-4.7iii", {{{"a", 0.2, 3.0}, {"xi", -2.0, 2.0}}, {}, {}}, C::absolute_exponential,
        [](const Params& p) { return LhsSpec{MBIntegrand(1.0, {num(p["a"])}, {fourier(p["xi"])}), kInv2Pi}; },
        [](const Params& p) {
            const double xi = p["xi"];
            return ComplexValue(std::exp(-std::exp(xi) + p["a"] * xi));
        });

    return cat;
}

}  // namespace detail

inline const std::vector<IdentityCase>& builtin_catalog() {
    static const std::vector<IdentityCase> catalog = detail::make_catalog();
    return catalog;
}

inline const IdentityCase& find_case(std::string_view id) {
    for (const auto& c : builtin_catalog())
        if (c.id == id) return c;
    throw domain_error("unknown identity id: " + std::string(id));
}

/// |lhs - rhs| / |rhs|, or the absolute difference when |rhs| < 1e-12.
inline double comparison_error(const ComplexValue& lhs, const ComplexValue& rhs) {
    const double d = std::abs(lhs - rhs);
    const double m = std::abs(rhs);
    return m < kAbsoluteFallback ? d : d / m;
}

/// Evaluates one sample. The quadrature aims one order below the case
/// tolerance; a sample that misses is recomputed once with a 100x tighter
/// target before it is recorded.
inline SampleRecord verify_sample(const IdentityCase& c, const Params& p, double tol) {
    SampleRecord s;
    s.params = p;
    try {
        s.rhs = c.rhs_evaluator(p);
        const LhsSpec spec = c.lhs_builder(p);
        const double target = std::abs(s.rhs) < kAbsoluteFallback ? 1.0 : std::abs(s.rhs);
        double quad_tol = 0.1 * tol * target / std::abs(spec.normalization);
        for (int pass = 0; pass < 2; ++pass, quad_tol *= 1e-2) {
            const QuadResult r = integrate_line(spec.integrand, quad_tol, spec.schedule);
            s.lhs = spec.normalization * r.value;
            s.error_estimate = std::abs(spec.normalization) * r.error_estimate;
            s.evaluations += r.evaluations;
            s.class_used = r.class_used;
            s.abs_error = std::abs(s.lhs - s.rhs);
            s.rel_error = comparison_error(s.lhs, s.rhs);
            if (s.rel_error < tol) break;
        }
    } catch (const std::exception& e) {
        s.failure = e.what();
        s.abs_error = std::numeric_limits<double>::infinity();
        s.rel_error = std::numeric_limits<double>::infinity();
    }
    return s;
}

inline VerificationReport verify_case(const IdentityCase& c, int n_samples, std::uint64_t seed,
                                      std::optional<double> tol_override = std::nullopt) {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.id = c.id;
    rep.convergence_class = c.convergence_class;
    rep.tol = tol_override.value_or(c.tol);
    for (const auto& p : sample_params(c.domain, n_samples, seed)) {
        rep.samples.push_back(verify_sample(c, p, rep.tol));
        rep.max_rel_error = std::max(rep.max_rel_error, rep.samples.back().rel_error);
    }
    rep.pass = rep.max_rel_error < rep.tol;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

/// Worker count: MBKIT_THREADS if set to an integer >= 1, else the
/// hardware concurrency.
inline unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MBKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) n = static_cast<unsigned>(v);
    }
    return n;
}

struct TolOverrides {
    std::optional<double> absolute_exponential;
    std::optional<double> absolute_polynomial;
    std::optional<double> conditional;

    [[nodiscard]] std::optional<double> for_class(ConvergenceClass c) const {
        switch (c) {
            case ConvergenceClass::absolute_exponential:
                return absolute_exponential;
            case ConvergenceClass::absolute_polynomial:
                return absolute_polynomial;
            case ConvergenceClass::conditional:
                return conditional;
        }
        return std::nullopt;
    }
};

/// Every case gets the same seed; reports follow catalog order.
inline std::vector<VerificationReport> verify_all(int n_samples, std::uint64_t seed,
                                                  const std::vector<std::string>& filter = {},
                                                  const TolOverrides& tols = {}) {
    if (n_samples < 1) throw domain_error("verify_all: n_samples must be at least 1");
    std::vector<const IdentityCase*> cases;
    if (filter.empty()) {
        for (const auto& c : builtin_catalog()) cases.push_back(&c);
    } else {
        for (const auto& id : filter) find_case(id);
        for (const auto& c : builtin_catalog())
            if (std::find(filter.begin(), filter.end(), c.id) != filter.end()) cases.push_back(&c);
    }
    std::vector<VerificationReport> out(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++)
            out[i] = verify_case(*cases[i], n_samples, seed, tols.for_class(cases[i]->convergence_class));
    };
    const unsigned n = std::min<unsigned>(thread_count(), static_cast<unsigned>(cases.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

inline bool all_pass(const std::vector<VerificationReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

}  // namespace mbkit
