#include <cstdlib>
#include <fstream>

#include "superbethe/harness.hpp"

#include "support.hpp"

using namespace superbethe;
using nlohmann::json;

namespace {

SuiteConfig parsed(std::vector<std::string> args) {
    SuiteConfig cfg;
    std::string help;
    REQUIRE(parse_config(args, cfg, help));
    return cfg;
}

std::string config_error_key(std::vector<std::string> args) {
    try {
        SuiteConfig cfg;
        std::string help;
        parse_config(args, cfg, help);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

SuiteConfig small(std::vector<std::string> suites) {
    SuiteConfig cfg;
    cfg.suites = std::move(suites);
    cfg.L = 3;
    cfg.max_a = cfg.max_b = 1;
    cfg.max_n = 1;
    cfg.draws = 2;
    return cfg;
}

} // namespace

TEST_CASE("defaults") {
    ::unsetenv("SUPERBETHE_SEED");
    const SuiteConfig cfg = parsed({});
    CHECK(cfg.L == 5);
    CHECK(cfg.c == Scalar(1));
    CHECK(cfg.twist[2] == Scalar(2));
    CHECK(cfg.draws == 5);
    CHECK(cfg.mode == Mode::exact);
    CHECK(cfg.suites == known_suites());
}

TEST_CASE("flags") {
    ::unsetenv("SUPERBETHE_SEED");
    const SuiteConfig cfg = parsed({"--suites", "actions", "--max-n", "2", "--c", "2/3", "--twist", "1,3/2,0.5",
                                    "--seed", "9", "--mode", "numeric", "--format", "text"});
    CHECK(cfg.suites == std::vector<std::string>{"actions"});
    CHECK(cfg.max_n == 2);
    CHECK(cfg.c == sbtest::q(2, 3));
    CHECK(cfg.twist[1] == sbtest::q(3, 2));
    CHECK(cfg.twist[2] == sbtest::q(1, 2));
    CHECK(cfg.seed == 9);
    CHECK(cfg.mode == Mode::numeric);
    CHECK(cfg.format == "text");
}

TEST_CASE("configuration errors name the key") {
    ::unsetenv("SUPERBETHE_SEED");
    CHECK(config_error_key({"--c", "0"}) == "c");
    CHECK(config_error_key({"--L", "9"}) == "L");
    CHECK(config_error_key({"--L", "3"}) == "max_a");
    CHECK(config_error_key({"--L", "3", "--max-a", "1", "--max-b", "2"}) == "max_b");
    CHECK(config_error_key({"--twist", "1,0,2"}) == "twist");
    CHECK(config_error_key({"--twist", "1,2"}) == "twist");
    CHECK(config_error_key({"--mode", "fast"}) == "mode");
    CHECK(config_error_key({"--suites", "nope"}) == "suites");
    CHECK(config_error_key({"--draws", "-1"}) == "draws");
    CHECK(config_error_key({"--bogus"}) == "args");
}

TEST_CASE("config file, flags override it, environment overrides the seed") {
    const std::string path = "harness_config_test.json";
    {
        std::ofstream out(path);
        out << R"({"L": 4, "c": "3/2", "draws": 7, "seed": 3, "suites": ["izergin"]})";
    }
    ::unsetenv("SUPERBETHE_SEED");
    SuiteConfig cfg = parsed({"--config", path, "--draws", "2"});
    CHECK(cfg.L == 4);
    CHECK(cfg.c == sbtest::q(3, 2));
    CHECK(cfg.draws == 2);
    CHECK(cfg.seed == 3);
    CHECK(cfg.suites == std::vector<std::string>{"izergin"});

    ::setenv("SUPERBETHE_SEED", "42", 1);
    cfg = parsed({"--config", path, "--seed", "5"});
    CHECK(cfg.seed == 42);
    ::unsetenv("SUPERBETHE_SEED");

    {
        std::ofstream out(path);
        out << R"({"colour": 1})";
    }
    CHECK(config_error_key({"--config", path}) == "colour");
    std::remove(path.c_str());
}

TEST_CASE("config survives a JSON round trip") {
    SuiteConfig cfg = small({"izergin", "chain"});
    cfg.c = sbtest::q(2, 3);
    const SuiteConfig back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("empty suite list gives an empty passing report") {
    const Report r = run_suite(small({}));
    CHECK(r.checks.empty());
    CHECK(exit_code(r) == 0);
    CHECK(r.to_json()["summary"]["total"] == 0);
}

TEST_CASE("izergin suite produces draws times checks, all passing") {
    SuiteConfig cfg = small({"izergin"});
    cfg.draws = 10;
    const Report r = run_suite(cfg);
    CHECK(r.checks.size() == 10 * 6);
    CHECK(r.failed() == 0);
    for (const auto& c : r.checks)
        if (c.residual.is_string())
            CHECK(c.residual == "0/1+0/1 i");
}

TEST_CASE("records are sorted by id then draw") {
    const Report r = run_suite(small({"defs", "appendix"}));
    for (std::size_t k = 1; k < r.checks.size(); ++k) {
        const auto& p = r.checks[k - 1];
        const auto& c = r.checks[k];
        CHECK((p.id < c.id || (p.id == c.id && p.params["draw"] <= c.params["draw"])));
    }
}

TEST_CASE("runs are reproducible") {
    const SuiteConfig cfg = small({"defs", "izergin", "bethe-equal", "actions"});
    const json a = report_body(run_suite(cfg).to_json());
    const json b = report_body(run_suite(cfg).to_json());
    CHECK(a.dump() == b.dump());
    SuiteConfig other = cfg;
    other.seed = 2;
    CHECK(report_body(run_suite(other).to_json()).dump() != a.dump());
}

TEST_CASE("report parse round trip is idempotent on the body") {
    const Report r = run_suite(small({"defs", "chain"}));
    const json once = r.to_json();
    const json twice = json::parse(once.dump(2));
    CHECK(report_body(twice).dump() == report_body(once).dump());
    for (const auto& c : once["checks"]) {
        CHECK(c.contains("suite"));
        CHECK(c.contains("id"));
        CHECK(c.contains("params"));
        CHECK(c.contains("pass"));
        CHECK(c.contains("residual"));
        CHECK(c.contains("ms"));
    }
}

TEST_CASE("failures are collected and listed first") {
    SuiteConfig cfg = small({"defs"});
    cfg.inject_failure = true;
    const Report r = run_suite(cfg);
    CHECK(r.failed() == 1);
    CHECK(exit_code(r) == 1);
    const std::string text = format_text(r);
    const auto first_row = text.find("\n\n") + 2;
    CHECK(text.compare(first_row, 4, "FAIL") == 0);
    CHECK(text.find("harness.injected") < text.find("PASS"));
}

TEST_CASE("id filter") {
    SuiteConfig cfg = small({"chain"});
    cfg.only = {"chain.ybe"};
    const Report r = run_suite(cfg);
    CHECK(r.checks.size() == cfg.draws);
    for (const auto& c : r.checks)
        CHECK(c.id == "chain.ybe");
}

TEST_CASE("numeric mode uses float residuals") {
    SuiteConfig cfg = small({"izergin", "actions"});
    cfg.mode = Mode::numeric;
    cfg.draws = 1;
    const Report r = run_suite(cfg);
    CHECK(r.failed() == 0);
    for (const auto& c : r.checks)
        CHECK(c.residual.is_number());
}

TEST_CASE("emit_report writes files and rejects unwritable paths") {
    const Report r = run_suite(small({"defs"}));
    const std::string path = "harness_report_test.json";
    emit_report(r, "json", path);
    std::ifstream in(path);
    const json back = json::parse(in);
    CHECK(back["summary"]["passed"] == r.passed());
    std::remove(path.c_str());
    CHECK_THROWS_AS(emit_report(r, "json", "/nonexistent-dir/report.json"), IoError);
    CHECK_THROWS_AS(emit_report(r, "yaml", path), ConfigError);
}
