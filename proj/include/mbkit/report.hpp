#pragma once

// Serialization of verification reports: JSON (fixed key order, 17
// significant digits), RFC 4180 CSV and a plain-text table.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mbkit/identity_suite.hpp"

namespace mbkit::report {

inline constexpr int kSchemaVersion = 1;

/// %.17g, with null for non-finite values (JSON has no inf or nan).
inline std::string number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

inline std::string complex_pair(const ComplexValue& z) { return "[" + number(z.real()) + ", " + number(z.imag()) + "]"; }

/// Wall times are left out so identical runs give identical bytes.
inline void write_json(std::ostream& os, const std::vector<VerificationReport>& reports, std::uint64_t seed) {
    os << "{\n";
    os << "  \"version\": " << kSchemaVersion << ",\n";
    os << "  \"seed\": " << seed << ",\n";
    os << "  \"rng\": {\"name\": " << json_string(kRngName) << ", \"version\": " << kRngVersion << "},\n";
    os << "  \"pass\": " << (all_pass(reports) ? "true" : "false") << ",\n";
    os << "  \"cases\": [";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        os << (i ? ",\n" : "\n") << "    {\n";
        os << "      \"id\": " << json_string(r.id) << ",\n";
        os << "      \"class\": " << json_string(to_string(r.convergence_class)) << ",\n";
        os << "      \"tol\": " << number(r.tol) << ",\n";
        os << "      \"pass\": " << (r.pass ? "true" : "false") << ",\n";
        os << "      \"max_rel_error\": " << number(r.max_rel_error) << ",\n";
        os << "      \"samples\": [";
        for (std::size_t j = 0; j < r.samples.size(); ++j) {
            const auto& s = r.samples[j];
            os << (j ? ",\n" : "\n") << "        {\"params\": {";
            for (std::size_t k = 0; k < s.params.values.size(); ++k)
                os << (k ? ", " : "") << json_string(s.params.values[k].first) << ": "
                   << number(s.params.values[k].second);
            os << "}, \"lhs\": " << complex_pair(s.lhs) << ", \"rhs\": " << complex_pair(s.rhs)
               << ", \"rel_error\": " << number(s.rel_error) << ", \"class_used\": "
               << json_string(to_string(s.class_used));
            if (!s.failure.empty()) os << ", \"failure\": " << json_string(s.failure);
            os << "}";
        }
        os << (r.samples.empty() ? "]\n" : "\n      ]\n") << "    }";
    }
    os << (reports.empty() ? "]\n" : "\n  ]\n") << "}\n";
}

/// Quotes a field when it holds a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << "\r\n";
}

inline std::string params_text(const Params& p) {
    std::string out;
    for (std::size_t k = 0; k < p.values.size(); ++k)
        out += (k ? ";" : "") + p.values[k].first + "=" + number(p.values[k].second);
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<VerificationReport>& reports) {
    write_csv_row(os, {"id", "class", "tol", "case_pass", "sample", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                       "rel_error", "class_used", "failure"});
    for (const auto& r : reports)
        for (std::size_t j = 0; j < r.samples.size(); ++j) {
            const auto& s = r.samples[j];
            write_csv_row(os, {r.id, std::string(to_string(r.convergence_class)), number(r.tol),
                               r.pass ? "true" : "false", std::to_string(j), params_text(s.params),
                               number(s.lhs.real()), number(s.lhs.imag()), number(s.rhs.real()),
                               number(s.rhs.imag()), number(s.rel_error), std::string(to_string(s.class_used)),
                               s.failure});
        }
}

inline void write_table(std::ostream& os, const std::vector<VerificationReport>& reports) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %-22s %8s %7s %12s %9s\n", "id", "class", "tol", "samples", "max_rel_err",
                  "time[s]");
    os << buf;
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%-22s %-22s %8.0e %7zu %12.3e %9.2f  %s\n", r.id.c_str(),
                      std::string(to_string(r.convergence_class)).c_str(), r.tol, r.samples.size(), r.max_rel_error,
                      r.wall_time, r.pass ? "PASS" : "FAIL");
        os << buf;
        for (const auto& s : r.samples)
            if (!s.failure.empty()) os << "    " << params_text(s.params) << ": " << s.failure << "\n";
    }
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.pass ? 1 : 0;
    os << passed << "/" << reports.size() << " cases passed\n";
}

}  // namespace mbkit::report
