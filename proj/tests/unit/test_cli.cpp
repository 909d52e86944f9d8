#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "galband/cli.hpp"

using galband::cli::run;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("bands subcommand reproduces the a=1 edges", "[cli]") {
    TempFile out("cli_bands_test.csv");
    const int rc = run({"bands", "--a", "1", "--m", "0.5", "--emin", "-3", "--emax", "1",
                        "--scan-points", "2000", "--out", out.path});
    REQUIRE(rc == 0);
    const std::string text = slurp(out.path);
    const auto pos = text.find("# edges ");
    REQUIRE(pos != std::string::npos);
    std::istringstream edges(text.substr(pos + 8));
    double e0 = 0, e1 = 0, e2 = 0;
    edges >> e0 >> e1 >> e2;
    CHECK(std::abs(e0 + 1.5) < 1e-8);
    CHECK(std::abs(e1 + 1.0) < 1e-8);
    CHECK(std::abs(e2 + 0.5) < 1e-8);
    CHECK(text.find("E,ReDelta,ImDelta") != std::string::npos);
}

TEST_CASE("catalog subcommand lists the [6,0,0,2] states with residuals", "[cli]") {
    TempFile out("cli_catalog_test.json");
    const int rc = run({"catalog", "--a", "2", "--g", "1", "--m", "0.5", "--out", out.path});
    REQUIRE(rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out.path));
    bool found = false;
    for (const auto& st : j) {
        CHECK(st.at("residual").get<double>() < 1e-8);
        found = found || std::abs(st.at("energy_re").get<double>() + 6.0) < 1e-10;
    }
    CHECK(found);
}

TEST_CASE("eval output is byte-identical across runs", "[cli]") {
    TempFile f1("cli_eval_1.csv"), f2("cli_eval_2.csv");
    REQUIRE(run({"eval", "--a", "2", "--b", "1", "--m", "0.37", "--grid", "128", "--out",
                 f1.path}) == 0);
    REQUIRE(run({"eval", "--a", "2", "--b", "1", "--m", "0.37", "--grid", "128", "--out",
                 f2.path}) == 0);
    const std::string s1 = slurp(f1.path), s2 = slurp(f2.path);
    REQUIRE(!s1.empty());
    CHECK(s1 == s2);
}

TEST_CASE("config file provides defaults, flags override", "[cli]") {
    TempFile cfgf("cli_cfg_test.json"), out("cli_cfg_out.csv");
    {
        std::ofstream c(cfgf.path);
        c << R"({"a": 1, "m": 0.5, "grid": 16})" << "\n";
    }
    REQUIRE(run({"eval", "--config", cfgf.path, "--out", out.path}) == 0);
    const std::string base = slurp(out.path);
    REQUIRE(run({"eval", "--config", cfgf.path, "--m", "0.6", "--out", out.path}) == 0);
    CHECK(slurp(out.path) != base);  // the flag overrode the config value
}

TEST_CASE("configuration errors exit with code 2", "[cli]") {
    CHECK(run({"bands", "--a", "1", "--emin", "2", "--emax", "-3"}) == 2);
    CHECK(run({"eval", "--format", "yaml"}) == 2);
    CHECK(run({"eval", "--no-such-flag"}) == 2);
    CHECK(run({"catalog", "--m", "1.5"}) == 2);

    TempFile cfgf("cli_badcfg_test.json");
    {
        std::ofstream c(cfgf.path);
        c << R"({"a": 1, "bogus_key": 3})" << "\n";
    }
    CHECK(run({"eval", "--config", cfgf.path}) == 2);
}

TEST_CASE("verify subcommand runs a selected suite", "[cli]") {
    CHECK(run({"verify", "--suite", "elliptic"}) == 0);
    CHECK(run({"verify", "--suite", "no-such-suite"}) == 2);
}

TEST_CASE("spec JSON round trip and key validation", "[cli]") {
    const galband::GALSpec s = galband::make_spec(2, 1, 0.5, -0.25, 0.37);
    const galband::GALSpec back = galband::spec_from_json(galband::to_json(s));
    CHECK(back.a == s.a);
    CHECK(back.b == s.b);
    CHECK(back.f == s.f);
    CHECK(back.g == s.g);
    CHECK(back.m.m == s.m.m);
    CHECK(back.beta == s.beta);
    CHECK_THROWS_AS(galband::spec_from_json(nlohmann::json{{"a", 1}, {"zz", 2}}),
                    std::invalid_argument);
}

TEST_CASE("bands JSON export carries the structure", "[cli]") {
    TempFile out("cli_bands_json.json");
    REQUIRE(run({"bands", "--a", "1", "--m", "0.5", "--emin", "-1.2", "--emax", "-0.8",
                 "--scan-points", "300", "--format", "json", "--out", out.path}) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out.path));
    REQUIRE(j.contains("edges"));
    REQUIRE(j.contains("gap_count"));
    REQUIRE(j["edges"].size() == 1);
    CHECK(std::abs(j["edges"][0].get<double>() + 1.0) < 1e-8);
}

TEST_CASE("GALBAND_THREADS caps the worker count", "[cli]") {
    setenv("GALBAND_THREADS", "1", 1);
    CHECK(galband::thread_budget() == 1);
    unsetenv("GALBAND_THREADS");
    CHECK(galband::thread_budget() >= 1);
}
