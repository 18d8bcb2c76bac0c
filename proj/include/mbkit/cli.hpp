#pragma once

// Command-line front end. run() returns the process exit code:
// 0 success, 1 verification or numerical failure, 2 usage error, 3 I/O error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbkit/complex_gamma.hpp"
#include "mbkit/delta_pullback.hpp"
#include "mbkit/identity_suite.hpp"
#include "mbkit/mb_quadrature.hpp"
#include "mbkit/report.hpp"
#include "mbkit/special_oracles.hpp"

namespace mbkit::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3 };

enum class Format { table, json, csv };

struct RunConfig {
    std::string command;
    std::vector<std::string> ids;
    int samples = 20;
    std::uint64_t seed = 7;
    TolOverrides tols;
    Format format = Format::table;
    std::optional<std::string> output;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Format parse_format(const std::string& s) {
    if (s == "table") return Format::table;
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw UsageError("unknown format: " + s);
}

/// Fills every field the command line left unset from a JSON config whose
/// keys are the long flag names.
inline void merge_config(RunConfig& cfg, const std::string& path, const std::map<std::string, bool>& given) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("invalid config file: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    auto unset = [&](const char* k) { return j.contains(k) && !given.at(k); };
    try {
        if (unset("id")) {
            if (j["id"].is_array())
                cfg.ids = j["id"].get<std::vector<std::string>>();
            else
                cfg.ids = {j["id"].get<std::string>()};
        }
        if (unset("samples")) cfg.samples = j["samples"].get<int>();
        if (unset("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (unset("format")) cfg.format = parse_format(j["format"].get<std::string>());
        if (unset("output")) cfg.output = j["output"].get<std::string>();
        if (unset("tol-exponential")) cfg.tols.absolute_exponential = j["tol-exponential"].get<double>();
        if (unset("tol-polynomial")) cfg.tols.absolute_polynomial = j["tol-polynomial"].get<double>();
        if (unset("tol-conditional")) cfg.tols.conditional = j["tol-conditional"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("invalid config value: ") + e.what());
    }
}

/// Writes to the output path when one is set, otherwise to out.
inline void emit(const std::optional<std::string>& path, std::ostream& out,
                 const std::function<void(std::ostream&)>& write) {
    if (!path) {
        write(out);
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + *path);
    write(f);
    f.flush();
    if (!f) throw IoError("write failed: " + *path);
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
    for (const auto& id : cfg.ids) {
        try {
            find_case(id);
        } catch (const domain_error&) {
            throw UsageError("unknown identity id: " + id);
        }
    }
    for (auto t : {cfg.tols.absolute_exponential, cfg.tols.absolute_polynomial, cfg.tols.conditional})
        if (t && !(*t > 0.0)) throw UsageError("tolerances must be positive");
    const auto reports = verify_all(cfg.samples, cfg.seed, cfg.ids, cfg.tols);
    emit(cfg.output, out, [&](std::ostream& os) {
        switch (cfg.format) {
            case Format::json:
                report::write_json(os, reports, cfg.seed);
                break;
            case Format::csv:
                report::write_csv(os, reports);
                break;
            case Format::table:
                report::write_table(os, reports);
                break;
        }
    });
    return all_pass(reports) ? kOk : kFailure;
}

// Value of an evaluation together with the line-integral metadata when the
// route was a quadrature.
struct EvalResult {
    ComplexValue value;
    std::optional<QuadResult> quad;
};

namespace routes {

inline constexpr double kInv2Pi = 0.5 / std::numbers::pi;
inline constexpr double kRouteTol = 1e-13;

inline GammaFactor num(double offset, double slope = 1.0) { return {offset, slope, FactorPosition::numerator}; }
inline GammaFactor den(double offset, double slope = 1.0) { return {offset, slope, FactorPosition::denominator}; }

inline EvalResult line(const MBIntegrand& f, ComplexValue norm) {
    QuadResult r = integrate_line(f, kRouteTol / std::max(std::abs(norm), 1e-300));
    r.value *= norm;
    r.error_estimate *= std::abs(norm);
    return {r.value, r};
}

// K_p(x) = (x/2)^-p / 2 * (1/2pi) int Gamma(c+it) Gamma(c+p+it) (x/2)^(-2c-2it) dt
inline EvalResult besselk_mb(double p, double x) {
    if (!(x > 0.0)) throw domain_error("besselk: requires x > 0");
    const double c = 0.5 + std::max(0.0, -p);
    const double h = 0.5 * x;
    return line(MBIntegrand(1.0, {num(c), num(c + p)}, {{h, -2.0 * c, -2.0}}), 0.5 * kInv2Pi * std::pow(h, -p));
}

// I_p(x) = (x/2)^p (1/2pi) int s^(-p-1) exp(s + (x/2)^2 / s) dt, s = 1 + it
inline EvalResult besseli_mb(double p, double x) {
    if (!(x > 0.0) || !(p > 0.0)) throw domain_error("besseli: the line route requires p > 0 and x > 0");
    const double h2 = 0.25 * x * x;
    auto log_e = [p, h2](double t) {
        const ComplexValue s(1.0, t);
        return -(p + 1.0) * std::log(s) + s + h2 / s;
    };
    const auto e = make_extra_factor(log_e, 0.0, 0.0, -p - 1.0, -p - 1.0, 1.0 + (p + 1.0) + h2);
    return line(MBIntegrand(1.0, {}, {}, e), kInv2Pi * std::pow(0.5 * x, p));
}

// J_a(x) = (x/2)^a (1/2pi) int s^(-a-1) exp(s - x^2 / (4 s)) dt, s = 1 + it
inline EvalResult besselj_mb(double a, double x) {
    if (!(x > 0.0) || !(a > 0.0)) throw domain_error("besselj: the line route requires a > 0 and x > 0");
    const double h2 = 0.25 * x * x;
    auto log_e = [a, h2](double t) {
        const ComplexValue s(1.0, t);
        return -(a + 1.0) * std::log(s) + s - h2 / s;
    };
    const auto e = make_extra_factor(log_e, 0.0, 0.0, -a - 1.0, -a - 1.0, 1.0 + (a + 1.0) + h2);
    return line(MBIntegrand(1.0, {}, {}, e), kInv2Pi * std::pow(0.5 * x, a));
}

// 1F1(a; b; x) for x < 0
inline EvalResult kummer_m_mb(double a, double b, double x) {
    if (!(a > 1.0) || !(b > 1.0) || !(x < 0.0)) throw domain_error("kummer_m: the line route requires a > 1, b > 1, x < 0");
    const double lg = log_gamma(b).real() - log_gamma(a).real();
    return line(MBIntegrand(1.0, {num(1.0, -1.0), num(a - 1.0), den(b - 1.0)}, {{-x, -1.0, 1.0}}),
                kInv2Pi * std::exp(lg));
}

inline EvalResult kummer_u_mb(double a, double b, double x) {
    if (!(a > 1.0) || !(a > b) || !(x > 0.0)) throw domain_error("kummer_u: the line route requires a > 1, a > b, x > 0");
    const double lg = log_gamma(a).real() + log_gamma(1.0 + a - b).real();
    return line(MBIntegrand(1.0, {num(1.0, -1.0), num(a - 1.0), num(a - b)}, {{x, 0.0, -1.0}}),
                kInv2Pi * std::exp((1.0 - a) * std::log(x) - lg));
}

// 2F1(a, b; c; z) for z < 0
inline EvalResult gauss_2f1_mb(double a, double b, double c, double z) {
    if (!(a > 1.0) || !(b > 1.0) || !(c > 1.0) || !(z < 0.0))
        throw domain_error("gauss_2f1: the line route requires a, b, c > 1 and z < 0");
    const double lg = log_gamma(c).real() - log_gamma(a).real() - log_gamma(b).real();
    return line(MBIntegrand(1.0, {num(a - 1.0), num(b - 1.0), num(1.0, -1.0), den(c - 1.0)}, {{-z, -1.0, 1.0}}),
                kInv2Pi * std::exp(lg));
}

}  // namespace routes

struct EvalArgs {
    std::string function;
    std::string method = "oracle";
    std::map<std::string, double> values;

    [[nodiscard]] double need(const std::string& k) const {
        auto it = values.find(k);
        if (it == values.end()) throw UsageError(function + " needs --" + k);
        return it->second;
    }
};

inline EvalResult evaluate(const EvalArgs& a) {
    const bool mb = a.method == "mb";
    if (a.method != "mb" && a.method != "oracle") throw UsageError("--method must be mb or oracle");
    const auto& f = a.function;
    if (f == "besselk") {
        const double p = a.need("p"), x = a.need("x");
        return mb ? routes::besselk_mb(p, x) : EvalResult{bessel_k(p, x), {}};
    }
    if (f == "besseli") {
        const double p = a.need("p"), x = a.need("x");
        return mb ? routes::besseli_mb(p, x) : EvalResult{bessel_i(p, x), {}};
    }
    if (f == "besselj") {
        const double p = a.need("p"), x = a.need("x");
        return mb ? routes::besselj_mb(p, x) : EvalResult{bessel_j_poisson(p, x), {}};
    }
    if (f == "kummer_m") {
        const double aa = a.need("a"), b = a.need("b"), x = a.need("x");
        return mb ? routes::kummer_m_mb(aa, b, x) : EvalResult{kummer_m(aa, b, x), {}};
    }
    if (f == "kummer_u") {
        const double aa = a.need("a"), b = a.need("b"), x = a.need("x");
        return mb ? routes::kummer_u_mb(aa, b, x) : EvalResult{kummer_u(aa, b, x), {}};
    }
    if (f == "gauss_2f1") {
        const double aa = a.need("a"), b = a.need("b"), c = a.need("c"), z = a.need("z");
        return mb ? routes::gauss_2f1_mb(aa, b, c, z) : EvalResult{gauss_2f1(aa, b, c, z), {}};
    }
    if (f == "gamma") {
        if (mb) throw UsageError("gamma has no line-integral route");
        return {gamma(ComplexValue(a.need("re"), a.values.count("im") ? a.values.at("im") : 0.0)), {}};
    }
    if (f == "beta") {
        const ComplexValue p = a.need("a"), q = a.need("b");
        // the integral route is the full-line representation
        return {mb ? beta_binet(p, q, 1e-13) : beta(p, q), {}};
    }
    throw UsageError("unknown function: " + f);
}

inline std::string format_value(const ComplexValue& z) {
    if (z.imag() == 0.0) return report::number(z.real());
    return report::number(z.real()) + (z.imag() < 0 ? " - " : " + ") + report::number(std::abs(z.imag())) + "i";
}

inline int cmd_eval(const EvalArgs& args, std::ostream& out) {
    EvalResult r;
    try {
        r = evaluate(args);
    } catch (const domain_error& e) {
        throw UsageError(e.what());
    } catch (const pole_error& e) {
        throw UsageError(e.what());
    }
    out << "value: " << format_value(r.value) << "\n";
    if (r.quad) {
        out << "class: " << to_string(r.quad->class_used) << "\n";
        out << "truncation_T: " << report::number(r.quad->truncation_T) << "\n";
        out << "evaluations: " << r.quad->evaluations << "\n";
        out << "error_estimate: " << report::number(r.quad->error_estimate) << "\n";
    }
    return kOk;
}

inline int cmd_pullback(const std::string& name, std::ostream& out) {
    bool known = false;
    for (auto n : pullback_example_names()) known = known || n == name;
    if (!known) throw UsageError("unknown pull-back example: " + name);
    const auto e = pullback_example(name);
    const auto mol = pullback_mollified_detail(e.phase, e.phi, e.schedule);
    const ComplexValue surf = pullback_surface(e.phase, e.chart, e.phi);
    const ComplexValue osc = oscillatory_check(e.phase, e.phi, e.osc_T, e.osc_eps);
    out << "example: " << name << "\n";
    out << "mollified: " << format_value(mol.value) << "\n";
    out << "mollifier_order: " << report::number(mol.empirical_order) << "\n";
    out << "surface: " << format_value(surf) << "\n";
    out << "oscillatory: " << format_value(osc) << "\n";
    out << "mollified-surface: " << report::number(std::abs(mol.value - surf)) << "\n";
    out << "mollified-oscillatory: " << report::number(std::abs(mol.value - osc)) << "\n";
    out << "surface-oscillatory: " << report::number(std::abs(surf - osc)) << "\n";
    return kOk;
}

struct BenchRow {
    std::string function;
    std::string params;
    std::string route;
    double wall_time = 0.0;
    ComplexValue value;
    double cross_rel_err = 0.0;
};

/// Fixed parameter grid; each point is evaluated by both routes.
inline std::vector<BenchRow> bench_rows(const std::string& which, int points) {
    std::vector<BenchRow> rows;
    auto frac = [points](int i) { return points == 1 ? 0.5 : static_cast<double>(i) / (points - 1); };
    auto timed = [](const EvalArgs& a) {
        const auto t0 = std::chrono::steady_clock::now();
        const EvalResult r = evaluate(a);
        return std::pair{r.value, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    };
    auto run = [&](const std::string& fn, const std::map<std::string, double>& v) {
        EvalArgs a{fn, "mb", v};
        const auto [mb, t_mb] = timed(a);
        a.method = "oracle";
        const auto [orc, t_orc] = timed(a);
        const double rel = comparison_error(mb, orc);
        std::string params;
        for (const auto& [k, x] : v) params += (params.empty() ? "" : ";") + k + "=" + report::number(x);
        rows.push_back({fn, params, "mb", t_mb, mb, rel});
        rows.push_back({fn, params, "oracle", t_orc, orc, rel});
    };
    const bool all = which == "all";
    if (!all && which != "besselk" && which != "besselj" && which != "2f1")
        throw UsageError("unknown bench function: " + which);
    for (int i = 0; i < points; ++i) {
        const double s = frac(i);
        if (all || which == "besselk") run("besselk", {{"p", -0.5 + 2.0 * s}, {"x", 0.5 + 2.5 * s}});
    }
    for (int i = 0; i < points; ++i) {
        const double s = frac(i);
        if (all || which == "besselj") run("besselj", {{"p", 0.6 + 1.9 * s}, {"x", 0.3 + 1.9 * s}});
    }
    for (int i = 0; i < points; ++i) {
        const double s = frac(i);
        if (all || which == "2f1")
            run("gauss_2f1", {{"a", 1.2 + 0.8 * s}, {"b", 2.0 - 0.6 * s}, {"c", 2.7 + s}, {"z", -0.2 - 2.3 * s}});
    }
    return rows;
}

inline int cmd_bench(const std::string& which, int points, const std::optional<std::string>& output,
                     std::ostream& out) {
    if (points < 1) throw UsageError("--points must be at least 1");
    const auto rows = bench_rows(which, points);
    emit(output, out, [&](std::ostream& os) {
        report::write_csv_row(os, {"function", "params", "route", "wall_time", "value", "cross_route_rel_err"});
        for (const auto& r : rows)
            report::write_csv_row(os, {r.function, r.params, r.route, report::number(r.wall_time),
                                       format_value(r.value), report::number(r.cross_rel_err)});
    });
    return kOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mellin-Barnes integral toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "table", config_path;
    std::string output;
    double tol_exp = 0, tol_poly = 0, tol_cond = 0;
    auto* verify = app.add_subcommand("verify", "Verify the identity catalog");
    auto* o_id = verify->add_option("--id", cfg.ids, "Identity id (repeatable)")->delimiter(',');
    auto* o_samples = verify->add_option("--samples", cfg.samples, "Samples per identity");
    auto* o_seed = verify->add_option("--seed", cfg.seed, "PRNG seed");
    auto* o_format = verify->add_option("--format", format, "table, json or csv");
    auto* o_output = verify->add_option("--output", output, "Write the report to this file");
    auto* o_te = verify->add_option("--tol-exponential", tol_exp, "Tolerance for absolute-exponential cases");
    auto* o_tp = verify->add_option("--tol-polynomial", tol_poly, "Tolerance for absolute-polynomial cases");
    auto* o_tc = verify->add_option("--tol-conditional", tol_cond, "Tolerance for conditional cases");
    verify->add_option("--config", config_path, "JSON config; flags take precedence");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate a special function by one route");
    eval->add_option("function", eval_args.function,
                     "besselk, besseli, besselj, kummer_m, kummer_u, gauss_2f1, gamma, beta")
        ->required();
    eval->add_option("--method", eval_args.method, "mb or oracle");
    std::map<std::string, double> named;
    for (const char* k : {"p", "x", "a", "b", "c", "z", "re", "im"})
        eval->add_option(std::string("--") + k, named[k], std::string("argument ") + k);

    std::string example;
    auto* pull = app.add_subcommand("pullback", "Run a pull-back demonstration");
    pull->add_option("example", example, "line, hyperbola, parabola or gelfand")->required();

    std::string bench_fn = "all";
    int bench_points = 10;
    std::string bench_output;
    auto* bench = app.add_subcommand("bench", "Time line-integral against oracle routes");
    bench->add_option("--function", bench_fn, "besselk, besselj, 2f1 or all");
    bench->add_option("--points", bench_points, "Grid points per function");
    auto* o_bench_out = bench->add_option("--output", bench_output, "Write the CSV to this file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (verify->parsed()) {
            if (o_format->count()) cfg.format = parse_format(format);
            if (o_output->count()) cfg.output = output;
            if (o_te->count()) cfg.tols.absolute_exponential = tol_exp;
            if (o_tp->count()) cfg.tols.absolute_polynomial = tol_poly;
            if (o_tc->count()) cfg.tols.conditional = tol_cond;
            if (!config_path.empty()) {
                const std::map<std::string, bool> given{{"id", o_id->count() > 0},
                                                        {"samples", o_samples->count() > 0},
                                                        {"seed", o_seed->count() > 0},
                                                        {"format", o_format->count() > 0},
                                                        {"output", o_output->count() > 0},
                                                        {"tol-exponential", o_te->count() > 0},
                                                        {"tol-polynomial", o_tp->count() > 0},
                                                        {"tol-conditional", o_tc->count() > 0}};
                merge_config(cfg, config_path, given);
            }
            cfg.command = "verify";
            return cmd_verify(cfg, out);
        }
        if (eval->parsed()) {
            for (const auto& [k, v] : named)
                if (eval->get_option("--" + k)->count()) eval_args.values[k] = v;
            return cmd_eval(eval_args, out);
        }
        if (pull->parsed()) return cmd_pullback(example, out);
        if (bench->parsed())
            return cmd_bench(bench_fn, bench_points,
                             o_bench_out->count() ? std::optional<std::string>(bench_output) : std::nullopt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const mbkit_error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace mbkit::cli
