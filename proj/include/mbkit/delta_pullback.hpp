#pragma once

// Pull-back of the Dirac delta through a submersive phase rho: the
// mollified limit (4 pi eps)^(-1/2) int phi exp(-rho^2 / (4 eps)), the
// surface integral of phi dS / |grad rho| over an explicit chart of the
// zero locus, and the damped oscillatory double integral.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "mbkit/complex_gamma.hpp"
#include "mbkit/errors.hpp"
#include "mbkit/quadrature.hpp"

namespace mbkit {

using Point = std::array<double, 3>;

struct PhaseField {
    int dimension = 1;
    std::function<double(const Point&)> evaluate;
    std::function<Point(const Point&)> gradient;
    /// Domain is the open positive orthant; quadrature runs in s = log x.
    bool positive_orthant = false;
    /// Coordinate integrated innermost; should be transverse to the locus.
    int transverse_axis = 0;
};

struct SchwartzFunction {
    int dimension = 1;
    std::function<ComplexValue(const Point&)> evaluate;
    /// |phi| < 1e-16 outside the ball of this radius (or, for positive-orthant
    /// phases, outside [1/R, R]^n wherever the Gaussian weight matters).
    double decay_radius = 1.0;
};

/// One parameter range; infinite ends are allowed.
struct ChartInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

/// Explicit parametrisation of {rho = 0}. For n = 1 the locus is the list
/// of points; otherwise map sends parameters in the box to the locus and
/// area_weight is the Euclidean surface element of the map.
struct LocusChart {
    std::vector<ChartInterval> domain;
    std::function<Point(const Point&)> map;
    std::function<double(const Point&)> area_weight;
    std::vector<Point> points;
};

struct MollifierSchedule {
    double eps0 = 1e-2;
    double ratio = 0.25;
    int steps = 5;
};

struct MollifiedResult {
    ComplexValue value;
    double error = 0.0;
    std::vector<ComplexValue> levels;  // P(eps_k)
    std::vector<double> eps;
    double empirical_order = 0.0;  // from the last three levels
};

inline constexpr double kSubmersionFloor = 1e-8;
inline constexpr double kLocusResidual = 1e-12;

/// Samples phi on a sphere just outside its decay radius.
inline bool check_decay(const SchwartzFunction& phi, int samples = 64) {
    using std::numbers::pi;
    const double R = 1.01 * phi.decay_radius;
    for (int i = 0; i < samples; ++i) {
        Point x{0, 0, 0};
        const double th = 2.0 * pi * (i + 0.5) / samples;
        if (phi.dimension == 1) {
            x[0] = (i % 2 == 0) ? R : -R;
        } else if (phi.dimension == 2) {
            x = {R * std::cos(th), R * std::sin(th), 0};
        } else {
            const double z = -1.0 + 2.0 * (i + 0.5) / samples;
            const double rr = std::sqrt(1.0 - z * z);
            x = {R * rr * std::cos(2.39996 * i), R * rr * std::sin(2.39996 * i), R * z};
        }
        if (std::abs(phi.evaluate(x)) > 1e-16) return false;
    }
    return true;
}

namespace detail {

inline void check_dimensions(const PhaseField& rho, const SchwartzFunction& phi, int max_dim) {
    if (rho.dimension < 1 || rho.dimension > max_dim)
        throw domain_error("pullback: dimension must be between 1 and " + std::to_string(max_dim));
    if (phi.dimension != rho.dimension) throw domain_error("pullback: phase and test function dimensions differ");
    if (!rho.evaluate || !rho.gradient || !phi.evaluate) throw domain_error("pullback: missing callable");
    if (rho.transverse_axis < 0 || rho.transverse_axis >= rho.dimension)
        throw domain_error("pullback: transverse axis out of range");
    if (!(phi.decay_radius > (rho.positive_orthant ? 1.0 : 0.0)))
        throw domain_error("pullback: invalid decay radius");
}

// Integration box in working coordinates.
inline std::pair<double, double> working_range(const PhaseField& rho, const SchwartzFunction& phi) {
    const double R = phi.decay_radius;
    if (rho.positive_orthant) return {-std::log(R), std::log(R)};
    return {-R, R};
}

// Working coordinates y -> x, plus the Jacobian dx/dy.
inline Point to_physical(const PhaseField& rho, const Point& y, double& jac) {
    jac = 1.0;
    if (!rho.positive_orthant) return y;
    Point x = y;
    for (int i = 0; i < rho.dimension; ++i) {
        x[i] = std::exp(y[i]);
        jac *= x[i];
    }
    return x;
}

// d rho / d y_k in working coordinates
inline double axis_derivative(const PhaseField& rho, const Point& x, int k) {
    const Point g = rho.gradient(x);
    return rho.positive_orthant ? g[k] * x[k] : g[k];
}

inline double gradient_norm(const PhaseField& rho, const Point& x) {
    const Point g = rho.gradient(x);
    double s = 0.0;
    for (int i = 0; i < rho.dimension; ++i) s += g[i] * g[i];
    return std::sqrt(s);
}

// Integral over the transverse axis of phi * jac * kernel(rho), restricted to
// cells where the kernel can be non-negligible; panels there are no wider
// than `scale / |d rho|`.
template <typename Kernel, typename Active>
ComplexValue transverse_integral(const PhaseField& rho, const SchwartzFunction& phi, Point y, double a, double b,
                                 double scale, const Kernel& kernel, const Active& active, long& evals) {
    constexpr int kCells = 256;
    const int k = rho.transverse_axis;
    const auto& gl = quad::gauss_legendre(16);
    const double h = (b - a) / kCells;
    std::vector<double> r(kCells + 1), d(kCells + 1);
    for (int i = 0; i <= kCells; ++i) {
        y[k] = a + i * h;
        double jac = 1.0;
        const Point x = to_physical(rho, y, jac);
        r[i] = rho.evaluate(x);
        d[i] = std::abs(axis_derivative(rho, x, k));
    }
    evals += kCells + 1;
    std::vector<ComplexValue> cells;
    for (int i = 0; i < kCells; ++i) {
        const double slope = std::max(d[i], d[i + 1]);
        const bool crosses = (r[i] <= 0.0 && r[i + 1] >= 0.0) || (r[i] >= 0.0 && r[i + 1] <= 0.0);
        const double lower = crosses ? 0.0 : std::min(std::abs(r[i]), std::abs(r[i + 1])) - 0.75 * h * slope;
        if (!active(lower)) continue;
        const int m = std::max(1, static_cast<int>(std::ceil(h * slope / scale)));
        const double w = h / m;
        ComplexValue cell = 0.0;
        for (int p = 0; p < m; ++p) {
            const double lo = a + i * h + p * w;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                y[k] = lo + 0.5 * w * (gl.nodes[q] + 1.0);
                double jac = 1.0;
                const Point x = to_physical(rho, y, jac);
                const double rv = rho.evaluate(x);
                const ComplexValue kv = kernel(rv, x);
                if (kv == ComplexValue(0.0)) continue;
                cell += 0.5 * w * gl.weights[q] * jac * phi.evaluate(x) * kv;
            }
            evals += static_cast<long>(gl.nodes.size());
        }
        cells.push_back(cell);
    }
    return quad::pairwise_sum<ComplexValue>(cells);
}

// Nested integration: transverse axis innermost, remaining axes by adaptive
// Gauss-Kronrod.
template <typename Kernel, typename Active>
ComplexValue nested_integral(const PhaseField& rho, const SchwartzFunction& phi, double scale, double tol,
                             const Kernel& kernel, const Active& active, long& evals) {
    const auto [a, b] = working_range(rho, phi);
    std::vector<int> outer;
    for (int i = 0; i < rho.dimension; ++i)
        if (i != rho.transverse_axis) outer.push_back(i);
    std::function<ComplexValue(Point, std::size_t)> level = [&](Point y, std::size_t depth) -> ComplexValue {
        if (depth == outer.size()) return transverse_integral(rho, phi, y, a, b, scale, kernel, active, evals);
        const int axis = outer[depth];
        auto g = [&](double v) {
            Point z = y;
            z[axis] = v;
            return level(z, depth + 1);
        };
        return quad::adaptive_gk<ComplexValue>(g, a, b, tol, 200000, 30, 1e-10).value;
    };
    return level(Point{0, 0, 0}, 0);
}

}  // namespace detail

/// P(eps) = (4 pi eps)^(-1/2) int phi exp(-rho^2 / (4 eps)) dx
inline ComplexValue mollified_level(const PhaseField& rho, const SchwartzFunction& phi, double eps,
                                    double tol = 1e-12) {
    using std::numbers::pi;
    detail::check_dimensions(rho, phi, 3);
    if (!(eps > 0.0)) throw domain_error("mollified_level: eps must be positive");
    const double band = std::sqrt(4.0 * eps * 46.0);  // weight < e^-46 outside
    long evals = 0;
    auto kernel = [&](double r, const Point& x) -> ComplexValue {
        const double w = std::exp(-r * r / (4.0 * eps));
        if (w > 1e-12 && detail::gradient_norm(rho, x) < kSubmersionFloor)
            throw submersion_error("pullback: gradient of the phase vanishes near its zero locus");
        return w;
    };
    auto active = [&](double lower) { return lower < band; };
    const ComplexValue I = detail::nested_integral(rho, phi, 2.0 * std::sqrt(eps), tol * std::sqrt(4.0 * pi * eps),
                                                   kernel, active, evals);
    return I / std::sqrt(4.0 * pi * eps);
}

/// Mollified levels at eps_k = eps0 ratio^k, extrapolated to eps -> 0.
inline MollifiedResult pullback_mollified_detail(const PhaseField& rho, const SchwartzFunction& phi,
                                                 const MollifierSchedule& schedule = {}) {
    if (rho.dimension > 3) throw domain_error("pullback_mollified: requires n <= 3");
    if (schedule.steps < 3 || !(schedule.eps0 > 0.0) || !(schedule.ratio > 0.0 && schedule.ratio < 1.0))
        throw domain_error("pullback_mollified: invalid schedule");
    MollifiedResult out;
    double eps = schedule.eps0;
    for (int k = 0; k < schedule.steps; ++k, eps *= schedule.ratio) {
        out.eps.push_back(eps);
        out.levels.push_back(mollified_level(rho, phi, eps));
    }
    const std::size_t n = out.levels.size();
    const double d1 = std::abs(out.levels[n - 2] - out.levels[n - 3]);
    const double d2 = std::abs(out.levels[n - 1] - out.levels[n - 2]);
    out.empirical_order = (d1 > 0.0 && d2 > 0.0) ? std::log(d1 / d2) / std::log(1.0 / schedule.ratio)
                                                 : std::numeric_limits<double>::infinity();
    const auto rich = quad::richardson<ComplexValue>(out.levels, schedule.ratio, 1.0);
    const auto& dg = rich.diagonal;
    const double last = std::abs(dg[n - 1] - dg[n - 2]);
    const double prev = std::abs(dg[n - 2] - dg[n - 3]);
    if (last > prev && last > 1e-8) throw convergence_error("pullback_mollified: extrapolants do not contract");
    out.value = rich.value;
    out.error = last;
    return out;
}

inline ComplexValue pullback_mollified(const PhaseField& rho, const SchwartzFunction& phi,
                                       const MollifierSchedule& schedule = {}) {
    return pullback_mollified_detail(rho, phi, schedule).value;
}

namespace detail {

inline quad::Domain chart_domain(const ChartInterval& iv, double& shift, double& sign, double& half) {
    const bool lo_inf = std::isinf(iv.lo), hi_inf = std::isinf(iv.hi);
    if (!(iv.lo < iv.hi)) throw chart_error("pullback_surface: empty chart interval");
    shift = 0.0;
    sign = 1.0;
    half = 1.0;
    if (lo_inf && hi_inf) return quad::Domain::real_line;
    if (hi_inf) {
        shift = iv.lo;
        return quad::Domain::half_line;
    }
    if (lo_inf) {
        shift = iv.hi;
        sign = -1.0;
        return quad::Domain::half_line;
    }
    shift = 0.5 * (iv.lo + iv.hi);
    half = 0.5 * (iv.hi - iv.lo);
    return quad::Domain::symmetric_interval;
}

}  // namespace detail

/// int phi(map(y)) area_weight(y) / |grad rho(map(y))| dy over the chart.
inline ComplexValue pullback_surface(const PhaseField& rho, const LocusChart& chart, const SchwartzFunction& phi) {
    detail::check_dimensions(rho, phi, 3);
    auto contribution = [&](const Point& x, double weight) -> ComplexValue {
        for (int i = 0; i < rho.dimension; ++i)
            if (!std::isfinite(x[i])) return 0.0;
        const ComplexValue v = phi.evaluate(x);
        if (v == ComplexValue(0.0) || weight == 0.0) return 0.0;
        const double res = rho.evaluate(x);
        if (!(std::abs(res) <= kLocusResidual))
            throw chart_error("pullback_surface: chart point is off the zero locus");
        const double g = detail::gradient_norm(rho, x);
        if (!(g >= kSubmersionFloor)) throw submersion_error("pullback_surface: phase is not submersive on the locus");
        return v * weight / g;
    };
    if (rho.dimension == 1) {
        ComplexValue s = 0.0;
        for (const auto& p : chart.points) s += contribution(p, 1.0);
        return s;
    }
    if (static_cast<int>(chart.domain.size()) != rho.dimension - 1 || !chart.map || !chart.area_weight)
        throw chart_error("pullback_surface: chart dimension does not match the phase");
    quad::DEOptions opt;
    opt.rel_tol = 1e-13;
    std::function<ComplexValue(Point, std::size_t)> level = [&](Point y, std::size_t depth) -> ComplexValue {
        if (depth == chart.domain.size()) return contribution(chart.map(y), chart.area_weight(y));
        double shift, sign, half;
        const auto dom = detail::chart_domain(chart.domain[depth], shift, sign, half);
        auto g = [&](double u) {
            Point z = y;
            z[depth] = shift + sign * half * u;
            return level(z, depth + 1) * half;
        };
        return quad::de_integrate<ComplexValue>(g, dom, opt).value;
    };
    return level(Point{0, 0, 0}, 0);
}

/// Table of K(r) = (1/pi) int_0^T exp(-eps t^2) cos(r t) dt on a uniform
/// grid over [0, r_max], read back by 8-point Lagrange interpolation.
/// Beyond r_max the kernel is taken as zero; callers choose r_max to cover
/// every phase value where the test function is not negligible.
class DampedDeltaKernel {
public:
    DampedDeltaKernel(double T, double eps, double r_max) : r_max_(r_max) {
        using std::numbers::pi;
        h_ = 0.25 / T;
        const int n = static_cast<int>(std::ceil(r_max / h_)) + 8;
        const auto& gl = quad::gauss_legendre(16);
        const double panel = std::min(T, pi / (r_max + 1.0));
        const int panels = static_cast<int>(std::ceil(T / panel));
        if (static_cast<double>(panels) * 16.0 * n > 4e9) throw budget_error("oscillatory_check: kernel table too large");
        table_.assign(n + 1, 0.0);
        // cos(i h t) by the Chebyshev recurrence, one quadrature node at a time
        for (int p = 0; p < panels; ++p) {
            const double lo = p * T / panels, len = T / panels;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                const double t = lo + 0.5 * len * (gl.nodes[q] + 1.0);
                const double w = 0.5 * len * gl.weights[q] * std::exp(-eps * t * t) / pi;
                const double c1 = std::cos(h_ * t);
                double prev = c1, cur = 1.0;
                for (int i = 0; i <= n; ++i) {
                    table_[i] += w * cur;
                    const double next = 2.0 * c1 * cur - prev;
                    prev = cur;
                    cur = next;
                }
            }
        }
    }

    [[nodiscard]] double operator()(double r) const {
        r = std::abs(r);
        if (r > r_max_) return 0.0;
        const double pos = r / h_;
        const int i0 = static_cast<int>(std::floor(pos)) - 3;
        double s = 0.0;
        for (int j = 0; j < 8; ++j) {
            double lj = 1.0;
            for (int m = 0; m < 8; ++m)
                if (m != j) lj *= (pos - (i0 + m)) / static_cast<double>(j - m);
            s += lj * table_[std::abs(i0 + j)];  // K is even
        }
        return s;
    }

private:
    double r_max_;
    double h_;
    std::vector<double> table_;
};

/// (1/2 pi) int_{-T}^{T} exp(-eps t^2) dt int phi exp(-i t rho) dx, computed
/// with the x integral outermost against the tabulated t integral.
inline ComplexValue oscillatory_check(const PhaseField& rho, const SchwartzFunction& phi, double T = 50.0,
                                      double eps = 1e-4) {
    using std::numbers::pi;
    detail::check_dimensions(rho, phi, 2);
    if (!(T > 0.0) || !(eps > 0.0)) throw domain_error("oscillatory_check: T and eps must be positive");
    const auto [a, b] = detail::working_range(rho, phi);
    // Phase range over the part of the box where phi matters.
    const int grid = rho.dimension == 2 ? 257 : 4097;
    std::vector<std::pair<double, double>> samples;
    double phi_max = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < (rho.dimension == 2 ? grid : 1); ++j) {
            const Point y{a + (b - a) * i / (grid - 1), a + (b - a) * j / (grid - 1), 0};
            double jac = 1.0;
            const Point x = detail::to_physical(rho, y, jac);
            const double m = std::abs(phi.evaluate(x)) * jac;
            phi_max = std::max(phi_max, m);
            samples.emplace_back(m, std::abs(rho.evaluate(x)));
        }
    double r_max = 0.0;
    for (const auto& [m, r] : samples)
        if (m > 1e-18 * phi_max) r_max = std::max(r_max, r);
    r_max = 1.5 * r_max + 1.0;
    const DampedDeltaKernel K(T, eps, r_max);
    long evals = 0;
    auto kernel = [&](double r, const Point&) -> ComplexValue { return K(r); };
    auto active = [](double) { return true; };
    const ComplexValue v = detail::nested_integral(rho, phi, pi / T, 1e-7, kernel, active, evals);
    if (evals > 200'000'000) throw budget_error("oscillatory_check: evaluation budget exceeded");
    return v;
}

/// The four demonstration phases.
struct PullbackExample {
    std::string name;
    PhaseField phase;
    SchwartzFunction phi;
    LocusChart chart;
    double expected = 0.0;
    MollifierSchedule schedule;
    double osc_T = 50.0;
    double osc_eps = 1e-4;
};

inline const std::vector<std::string_view>& pullback_example_names() {
    static const std::vector<std::string_view> names{"line", "hyperbola", "parabola", "gelfand"};
    return names;
}

inline PullbackExample pullback_example(std::string_view name) {
    PullbackExample e;
    e.name = std::string(name);
    if (name == "line") {
        // rho = 2u - xi, phi = (e^u + e^-u)^(-2a), a = 1/2, xi = 0
        const double xi = 0.0, a = 0.5;
        e.phase = {1, [=](const Point& x) { return 2.0 * x[0] - xi; }, [](const Point&) { return Point{2.0, 0, 0}; }};
        e.phi = {1, [=](const Point& x) { return ComplexValue(std::exp(-2.0 * a * detail::log_two_cosh(x[0]))); }, 38.0};
        e.chart.points = {Point{xi / 2.0, 0, 0}};
        e.expected = 0.25;
        e.osc_eps = 1e-3;
        return e;
    }
    if (name == "gelfand") {
        const double v0 = 0.3;
        e.phase = {1, [=](const Point& x) { return x[0] - v0; }, [](const Point&) { return Point{1.0, 0, 0}; }};
        e.phi = {1, [](const Point& x) { return ComplexValue(std::exp(-x[0] * x[0])); }, 6.2};
        e.chart.points = {Point{v0, 0, 0}};
        e.expected = std::exp(-v0 * v0);
        return e;
    }
    if (name == "hyperbola") {
        // rho = log(uv) - log(pq) on the positive quadrant, p = q = 1
        const double pq = 1.0;
        e.phase = {2, [=](const Point& x) { return std::log(x[0]) + std::log(x[1]) - std::log(pq); },
                   [](const Point& x) { return Point{1.0 / x[0], 1.0 / x[1], 0}; }, true, 1};
        e.phi = {2, [](const Point& x) { return ComplexValue(std::exp(-x[0] - x[1])); }, 40.0};
        e.chart.domain = {ChartInterval{0.0, std::numeric_limits<double>::infinity()}};
        e.chart.map = [=](const Point& y) { return Point{y[0], pq / y[0], 0}; };
        e.chart.area_weight = [=](const Point& y) {
            const double d = pq / (y[0] * y[0]);
            return std::sqrt(1.0 + d * d);
        };
        e.expected = 0.227787745499066871;
        return e;
    }
    if (name == "parabola") {
        // rho = u - 1 + y^2, phi = exp(-pi y^2 / 4 - rho^2); on the locus
        // phi = exp(-pi y^2 / 4), so the pull-back is int exp(-pi y^2/4) dy = 2.
        using std::numbers::pi;
        e.phase = {2, [](const Point& x) { return x[0] - 1.0 + x[1] * x[1]; },
                   [](const Point& x) { return Point{1.0, 2.0 * x[1], 0}; }};
        e.phi = {2,
                 [](const Point& x) {
                     const double r = x[0] - 1.0 + x[1] * x[1];
                     return ComplexValue(std::exp(-pi * x[1] * x[1] / 4.0 - r * r));
                 },
                 50.0};
        e.chart.domain = {ChartInterval{}};
        e.chart.map = [](const Point& y) { return Point{1.0 - y[0] * y[0], y[0], 0}; };
        e.chart.area_weight = [](const Point& y) { return std::sqrt(1.0 + 4.0 * y[0] * y[0]); };
        e.expected = 2.0;
        return e;
    }
    throw domain_error("unknown pull-back example: " + std::string(name));
}

}  // namespace mbkit
