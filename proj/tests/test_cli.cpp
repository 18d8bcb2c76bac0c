#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mbkit/cli.hpp"

using namespace mbkit;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// "key: value" line from command output
double field(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + ": ", 0) == 0) return std::stod(line.substr(key.size() + 2));
    ADD_FAILURE() << "missing " << key << " in\n" << text;
    return NAN;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0, pos;
    while ((pos = text.find("\r\n", start)) != std::string::npos) {
        out.push_back(text.substr(start, pos - start));
        start = pos + 2;
    }
    return out;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("mbkit_test_" + name);
}

}  // namespace

TEST(Report, NumberFormatting) {
    EXPECT_EQ(report::number(0.1), "0.10000000000000001");
    EXPECT_EQ(report::number(1.0), "1");
    EXPECT_EQ(report::number(INFINITY), "null");
    EXPECT_EQ(report::number(NAN), "null");
}

TEST(Report, CsvQuoting) {
    EXPECT_EQ(report::csv_field("plain"), "plain");
    EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(report::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(report::csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Report, JsonEscaping) { EXPECT_EQ(report::json_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\""); }

TEST(Verify, JsonSchema) {
    const auto r = run({"verify", "--id", "cahen-4.7i", "--samples", "5", "--seed", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["version"], 1);
    EXPECT_EQ(j["seed"], 1);
    EXPECT_EQ(j["rng"]["name"], "mt19937_64/uniform53");
    ASSERT_EQ(j["cases"].size(), 1u);
    const auto& c = j["cases"][0];
    EXPECT_EQ(c["id"], "cahen-4.7i");
    EXPECT_EQ(c["pass"], true);
    EXPECT_TRUE(c["max_rel_error"].is_number());
    ASSERT_EQ(c["samples"].size(), 5u);
    for (const auto& s : c["samples"]) {
        EXPECT_TRUE(s["params"].contains("c"));
        EXPECT_TRUE(s["params"].contains("y"));
        EXPECT_EQ(s["lhs"].size(), 2u);
        EXPECT_EQ(s["rhs"].size(), 2u);
        EXPECT_TRUE(s["rel_error"].is_number());
        const double y = s["params"]["y"];
        EXPECT_NEAR(s["rhs"][0].get<double>(), std::exp(-y), 1e-15);
    }
}

TEST(Verify, CsvAndTable) {
    auto r = run({"verify", "--id", "cahen-4.7i,gammaft-4.7iii", "--samples", "3", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = csv_lines(r.out);
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[0].rfind("id,class,tol,case_pass,sample,params", 0), 0u);
    r = run({"verify", "--id", "cahen-4.7i", "--samples", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("1/1 cases passed"), std::string::npos);
}

TEST(Verify, UsageErrors) {
    for (const auto& args : std::vector<std::vector<std::string>>{{"verify", "--id", "no-such-id"},
                                                                  {"verify", "--samples", "0"},
                                                                  {"verify", "--format", "xml"},
                                                                  {"verify", "--tol-exponential", "-1"},
                                                                  {"verify", "--bogus"},
                                                                  {"frobnicate"},
                                                                  {}}) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 2);
        EXPECT_TRUE(r.out.empty());
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Verify, FailureExitCode) {
    const auto r = run({"verify", "--id", "cahen-4.7i", "--samples", "2", "--tol-exponential", "1e-30"});
    EXPECT_EQ(r.code, 1);
}

TEST(Verify, OutputFileAndIoError) {
    const auto path = temp_path("report.json");
    auto r = run({"verify", "--id", "cahen-4.7i", "--samples", "2", "--format", "json", "--output", path.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    EXPECT_NO_THROW((void)nlohmann::json::parse(in));
    std::filesystem::remove(path);
    r = run({"verify", "--id", "cahen-4.7i", "--samples", "2", "--output", "/nonexistent-dir/x/report.json"});
    EXPECT_EQ(r.code, 3);
    r = run({"verify", "--config", "/nonexistent-dir/config.json"});
    EXPECT_EQ(r.code, 3);
}

TEST(Verify, ConfigMergeFlagsWin) {
    const auto path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"id": ["cahen-4.7i"], "samples": 4, "seed": 3, "format": "json"})";
    }
    auto r = run({"verify", "--config", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["seed"], 3);
    EXPECT_EQ(j["cases"][0]["samples"].size(), 4u);
    r = run({"verify", "--config", path.string(), "--samples", "2", "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["seed"], 9);
    EXPECT_EQ(j["cases"][0]["samples"].size(), 2u);
    {
        std::ofstream f(path);
        f << "{not json";
    }
    EXPECT_EQ(run({"verify", "--config", path.string()}).code, 2);
    std::filesystem::remove(path);
}

TEST(Verify, ByteIdenticalJson) {
    const std::vector<std::string> args{"verify", "--id", "ramanujan-3.3,hardy-3.9ii,laplace-4.7ii",
                                        "--samples", "4", "--seed", "7", "--format", "json"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Eval, BesselKBothRoutes) {
    const auto o = run({"eval", "besselk", "--p", "0.5", "--x", "2", "--method", "oracle"});
    const auto m = run({"eval", "besselk", "--p", "0.5", "--x", "2", "--method", "mb"});
    ASSERT_EQ(o.code, 0);
    ASSERT_EQ(m.code, 0);
    const double exact = std::sqrt(std::numbers::pi / 4.0) * std::exp(-2.0);
    EXPECT_NEAR(field(o.out, "value"), exact, 1e-14);
    EXPECT_NEAR(field(o.out, "value"), 0.1199377, 1e-7);
    EXPECT_LT(std::abs(field(m.out, "value") - exact) / exact, 1e-8);
    EXPECT_GE(field(m.out, "truncation_T"), 2.0);
    EXPECT_GT(field(m.out, "evaluations"), 0.0);
    EXPECT_GE(field(m.out, "error_estimate"), 0.0);
}

TEST(Eval, Gamma) {
    const auto r = run({"eval", "gamma", "--re", "0.5", "--im", "0"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(field(r.out, "value"), 1.7724538509, 1e-10);
}

TEST(Eval, DualRoutesAgree) {
    const std::vector<std::vector<std::string>> cases{
        {"besseli", "--p", "0.5", "--x", "2"},
        {"besselj", "--p", "1.5", "--x", "2"},
        {"kummer_m", "--a", "1.5", "--b", "2.5", "--x", "-1.3"},
        {"kummer_u", "--a", "2.5", "--b", "1", "--x", "1.5"},
        {"gauss_2f1", "--a", "1.5", "--b", "1.2", "--c", "3", "--z", "-0.7"},
        {"beta", "--a", "1.5", "--b", "2.5"}};
    for (auto args : cases) {
        args.insert(args.begin(), "eval");
        auto mb = args, orc = args;
        mb.insert(mb.end(), {"--method", "mb"});
        orc.insert(orc.end(), {"--method", "oracle"});
        const auto a = run(mb), b = run(orc);
        ASSERT_EQ(a.code, 0) << args[1] << a.err;
        ASSERT_EQ(b.code, 0) << args[1] << b.err;
        const double va = field(a.out, "value"), vb = field(b.out, "value");
        EXPECT_LT(std::abs(va - vb) / std::abs(vb), 1e-9) << args[1];
    }
}

TEST(Eval, Errors) {
    EXPECT_EQ(run({"eval", "zeta", "--x", "2"}).code, 2);
    EXPECT_EQ(run({"eval", "besselk", "--p", "0.5", "--x", "-2"}).code, 2);
    EXPECT_EQ(run({"eval", "besselk", "--p", "0.5"}).code, 2);
    EXPECT_EQ(run({"eval", "gamma", "--re", "-2"}).code, 2);
    EXPECT_EQ(run({"eval", "gamma", "--re", "1", "--method", "mb"}).code, 2);
    EXPECT_EQ(run({"eval", "besselk", "--p", "0.5", "--x", "2", "--method", "both"}).code, 2);
    const auto r = run({"eval", "kummer_m", "--a", "0.5", "--b", "2", "--x", "-1", "--method", "mb"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
}

TEST(Pullback, Line) {
    const auto r = run({"pullback", "line"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(field(r.out, "mollified"), 0.25, 1e-9);
    EXPECT_NEAR(field(r.out, "surface"), 0.25, 1e-12);
    EXPECT_NEAR(field(r.out, "oscillatory"), 0.25, 1e-3);
    EXPECT_LT(field(r.out, "mollified-surface"), 1e-6);
    EXPECT_LT(field(r.out, "mollified-oscillatory"), 1e-3);
}

TEST(Pullback, HyperbolaAndGelfand) {
    auto r = run({"pullback", "hyperbola"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(field(r.out, "surface"), 0.2277877, 1e-7);
    r = run({"pullback", "gelfand"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(field(r.out, "surface"), 0.9139312, 1e-7);
    EXPECT_EQ(run({"pullback", "circle"}).code, 2);
}

TEST(Bench, BesselKGrid) {
    const auto a = run({"bench", "--function", "besselk", "--points", "10"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto lines = csv_lines(a.out);
    ASSERT_EQ(lines.size(), 21u);
    EXPECT_EQ(lines[0], "function,params,route,wall_time,value,cross_route_rel_err");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto last = lines[i].substr(lines[i].rfind(',') + 1);
        EXPECT_LT(std::stod(last), 1e-6) << lines[i];
    }
    // value columns repeat exactly; timings may not
    const auto b = run({"bench", "--function", "besselk", "--points", "10"});
    const auto lb = csv_lines(b.out);
    auto strip = [](const std::string& row) {
        std::vector<std::string> f;
        std::stringstream ss(row);
        std::string x;
        while (std::getline(ss, x, ',')) f.push_back(x);
        f.erase(f.begin() + 3);
        return f;
    };
    for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(strip(lines[i]), strip(lb[i]));
}

TEST(Bench, AllFunctionsAndErrors) {
    const auto r = run({"bench", "--points", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(csv_lines(r.out).size(), 19u);
    EXPECT_EQ(run({"bench", "--function", "zeta"}).code, 2);
    EXPECT_EQ(run({"bench", "--points", "0"}).code, 2);
    EXPECT_EQ(run({"bench", "--output", "/nonexistent-dir/x.csv", "--points", "1"}).code, 3);
}

TEST(Help, ExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}
