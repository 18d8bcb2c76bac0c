#pragma once

// Shared one-dimensional quadrature kernels: Gauss-Kronrod panels,
// Gauss-Legendre rules, double-exponential (tanh-sinh family) refinement,
// Wynn's epsilon algorithm and geometric Richardson extrapolation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

#include "mbkit/errors.hpp"

namespace mbkit::quad {

using complex = std::complex<double>;

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const complex& z) { return std::abs(z); }

template <typename T>
struct Estimate {
    T value{};
    double error = 0.0;
    double l1 = 0.0;  // integral of |f|, used as a scale
    long evaluations = 0;
};

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15

namespace detail {
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

/// One G7/K15 panel on [a, b]; error is |K15 - G7|.
template <typename T, typename F>
Estimate<T> gauss_kronrod15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * detail::kWgk[7];
    T gauss = fc * detail::kWg[3];
    double l1 = magnitude(fc) * detail::kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * detail::kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * detail::kWgk[j];
        l1 += (magnitude(f1) + magnitude(f2)) * detail::kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * detail::kWg[j / 2];
    }
    Estimate<T> out;
    out.value = kron * h;
    out.error = magnitude((kron - gauss) * h);
    out.l1 = l1 * std::abs(h);
    out.evaluations = 15;
    return out;
}

/// Sums values with a fixed pairwise tree; the result depends only on order.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.empty()) return T{};
    if (xs.size() <= 8) {
        T s{};
        for (const auto& x : xs) s += x;
        return s;
    }
    const std::size_t mid = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, mid)) + pairwise_sum(xs.subspan(mid));
}

/// Adaptive G7/K15 on [a, b] with bisection until every panel meets
/// err <= abs_tol * len / (b - a), or err <= rel_floor * (panel integral of
/// |f|) when roundoff dominates. Throws budget_error past max_evals.
template <typename T, typename F>
Estimate<T> adaptive_gk(F&& f, double a, double b, double abs_tol, long max_evals,
                        int max_depth = 40, double rel_floor = 0.0) {
    struct Panel {
        double a, b;
        int depth;
    };
    struct Done {
        double a;
        T value;
    };
    std::vector<Panel> stack{{a, b, 0}};
    std::vector<Done> done;
    Estimate<T> out;
    const double total = b - a;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        auto e = gauss_kronrod15<T>(f, p.a, p.b);
        out.evaluations += e.evaluations;
        if (out.evaluations > max_evals)
            throw budget_error("adaptive quadrature exceeded its evaluation budget");
        const double allowed = std::max(abs_tol * (p.b - p.a) / total, rel_floor * e.l1);
        if (e.error <= allowed || p.depth >= max_depth) {
            done.push_back({p.a, e.value});
            out.error += e.error;
            out.l1 += e.l1;
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack.push_back({m, p.b, p.depth + 1});
            stack.push_back({p.a, m, p.depth + 1});
        }
    }
    std::sort(done.begin(), done.end(), [](const Done& x, const Done& y) { return x.a < y.a; });
    std::vector<T> vals;
    vals.reserve(done.size());
    for (const auto& d : done) vals.push_back(d.value);
    out.value = pairwise_sum<T>(vals);
    return out;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

inline GaussRule make_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Cached n-point Gauss-Legendre rule on [-1, 1].
inline const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// Double-exponential quadrature

enum class Domain { unit_interval, half_line, real_line, symmetric_interval };

struct DEOptions {
    double rel_tol = 1e-13;  // relative to the integral of |f|
    double abs_tol = 0.0;
    int max_levels = 20;
    int min_levels = 3;
};

namespace detail {
// Node in transformed coordinates: point u, distances to finite endpoints,
// and the Jacobian du/dx.
struct DENode {
    double u, left, right, jac;
};

inline DENode de_node(Domain d, double x) {
    using std::numbers::pi;
    switch (d) {
        case Domain::unit_interval:
        case Domain::symmetric_interval: {
            const double s = pi * std::sinh(x);
            const double l = 1.0 / (1.0 + std::exp(-s));
            const double r = 1.0 / (1.0 + std::exp(s));
            const double j = pi * std::cosh(x) * l * r;
            if (d == Domain::unit_interval) return {l, l, r, j};
            const double u = (l < r) ? -1.0 + 2.0 * l : 1.0 - 2.0 * r;
            return {u, 2.0 * l, 2.0 * r, 2.0 * j};
        }
        case Domain::half_line: {
            const double u = std::exp(0.5 * pi * std::sinh(x));
            return {u, u, std::numeric_limits<double>::infinity(), 0.5 * pi * std::cosh(x) * u};
        }
        case Domain::real_line: {
            const double s = 0.5 * pi * std::sinh(x);
            return {std::sinh(s), std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(), 0.5 * pi * std::cosh(x) * std::cosh(s)};
        }
    }
    return {0, 0, 0, 0};
}

inline double de_range(Domain d) {
    switch (d) {
        case Domain::unit_interval:
        case Domain::symmetric_interval:
            return 6.09;
        case Domain::half_line:
        case Domain::real_line:
            return 6.78;
    }
    return 6.0;
}

template <typename T, typename F>
T de_call(F& f, const DENode& n) {
    if constexpr (std::is_invocable_v<F&, double, double, double>)
        return static_cast<T>(f(n.u, n.left, n.right));
    else
        return static_cast<T>(f(n.u));
}
}  // namespace detail

/// Trapezoid refinement under a double-exponential change of variables.
/// Level m uses step 2^-m; the error is the difference between successive
/// levels. Integrands on finite domains may accept (u, u - a, b - u) to see
/// endpoint distances without cancellation.
template <typename T, typename F>
Estimate<T> de_integrate(F&& f, Domain d, const DEOptions& opt = {}) {
    const double xmax = detail::de_range(d);
    Estimate<T> out;
    T sum{};
    double l1 = 0.0;
    auto add = [&](double x) {
        const auto node = detail::de_node(d, x);
        if (node.jac == 0.0 || !std::isfinite(node.jac)) return;
        if (d == Domain::unit_interval || d == Domain::symmetric_interval) {
            if (node.left == 0.0 || node.right == 0.0) return;
        } else if (d == Domain::half_line) {
            if (node.u == 0.0 || !std::isfinite(node.u)) return;
        } else if (!std::isfinite(node.u)) {
            return;
        }
        const T v = detail::de_call<T>(f, node);
        ++out.evaluations;
        const T c = v * node.jac;
        if (!std::isfinite(magnitude(c)))
            throw domain_error("non-finite integrand value in double-exponential quadrature");
        sum += c;
        l1 += magnitude(c);
    };
    double h = 1.0;
    for (double x = -std::floor(xmax); x <= xmax; x += 1.0) add(x);
    T prev = sum * h;
    for (int level = 1; level <= opt.max_levels; ++level) {
        h *= 0.5;
        const long count = static_cast<long>(std::floor(xmax / h));
        for (long k = -count; k <= count; ++k) {
            if (k % 2 == 0) continue;
            add(k * h);
        }
        const T cur = sum * h;
        out.value = cur;
        out.error = magnitude(cur - prev);
        out.l1 = l1 * h;
        if (level >= opt.min_levels &&
            out.error <= std::max(opt.abs_tol, opt.rel_tol * out.l1))
            return out;
        prev = cur;
    }
    throw convergence_error("double-exponential quadrature did not converge");
}

// ---------------------------------------------------------------------------
// Wynn epsilon acceleration of partial sums

template <typename T>
class EpsilonTable {
public:
    /// Appends a partial sum and returns the current accelerated estimate.
    T push(const T& partial_sum) {
        sums_.push_back(partial_sum);
        history_.push_back(extrapolate());
        const std::size_t h = history_.size();
        if (h >= 3) {
            error_ = std::max(magnitude(history_[h - 1] - history_[h - 2]),
                              magnitude(history_[h - 1] - history_[h - 3]));
        }
        return history_.back();
    }
    [[nodiscard]] T estimate() const { return history_.empty() ? T{} : history_.back(); }
    /// Spread of the last three estimates; infinite until three exist.
    [[nodiscard]] double error() const { return error_; }
    [[nodiscard]] std::size_t size() const { return sums_.size(); }

private:
    // Deepest even column entry of the epsilon table built on all sums.
    T extrapolate() const {
        std::vector<T> prev(sums_.size() + 1, T{});
        std::vector<T> cur = sums_;
        T best = sums_.back();
        for (std::size_t k = 1; cur.size() > 1; ++k) {
            std::vector<T> next(cur.size() - 1);
            for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
                const T diff = cur[i + 1] - cur[i];
                if (magnitude(diff) == 0.0) return (k % 2 == 1) ? cur.back() : best;
                next[i] = prev[i + 1] + T(1.0) / diff;
            }
            if (k % 2 == 0) best = next.back();
            prev = std::move(cur);
            cur = std::move(next);
        }
        return best;
    }

    std::vector<T> sums_;
    std::vector<T> history_;
    double error_ = std::numeric_limits<double>::infinity();
};

// ---------------------------------------------------------------------------
// Richardson extrapolation for samples at eps_k = eps0 * ratio^k

template <typename T>
struct RichardsonResult {
    std::vector<T> diagonal;  // best extrapolant using levels 0..k
    T value{};
    double error = 0.0;
};

/// Neville-style tableau assuming I(eps) = I0 + sum_j c_j eps^(order * j).
template <typename T>
RichardsonResult<T> richardson(std::span<const T> samples, double ratio, double order = 1.0) {
    RichardsonResult<T> out;
    std::vector<T> row(samples.begin(), samples.end());
    const std::size_t n = row.size();
    std::vector<std::vector<T>> table(n);
    for (std::size_t k = 0; k < n; ++k) {
        table[k].push_back(row[k]);
        for (std::size_t j = 1; j <= k; ++j) {
            const double factor = std::pow(ratio, -order * static_cast<double>(j)) - 1.0;
            table[k].push_back(table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / factor);
        }
        out.diagonal.push_back(table[k][k]);
    }
    out.value = out.diagonal.back();
    out.error = n >= 2 ? magnitude(out.diagonal[n - 1] - out.diagonal[n - 2])
                       : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace mbkit::quad
