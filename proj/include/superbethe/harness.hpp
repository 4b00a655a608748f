#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "superbethe/errors.hpp"
#include "superbethe/scalar.hpp"

namespace superbethe {

inline constexpr const char* kVersion = "superbethe 1.0.0";

/// Suite names in execution order.
const std::vector<std::string>& known_suites();

struct SuiteConfig {
    std::vector<std::string> suites = known_suites();
    std::size_t L = 5;
    Scalar c = Scalar(1);
    std::array<Scalar, 3> twist{Scalar(1), Scalar(1), Scalar(2)};
    std::size_t max_a = 2;
    std::size_t max_b = 2;
    std::size_t max_n = 2;
    std::size_t draws = 5;
    std::uint64_t seed = 1;
    Mode mode = Mode::exact;
    std::string format = "json";
    std::string out; // empty or "-" means standard output
    /// Check-id prefixes to run; empty runs everything.
    std::vector<std::string> only;
    /// Adds one check that always fails.
    bool inject_failure = false;
};

/// Throws ConfigError naming the offending key.
void validate(const SuiteConfig& cfg);

/// Flags (without the program name) override values read from --config FILE.
/// SUPERBETHE_SEED overrides --seed. Throws ConfigError; --help is reported by
/// returning false with the help text in `help`.
bool parse_config(const std::vector<std::string>& args, SuiteConfig& cfg, std::string& help);

nlohmann::json config_to_json(const SuiteConfig& cfg);
/// Applies the keys present in `j` on top of `base`.
SuiteConfig config_from_json(const nlohmann::json& j, SuiteConfig base = {});

struct CheckRecord {
    std::string suite;
    std::string id;
    nlohmann::json params;
    bool pass = false;
    nlohmann::json residual;
    double ms = 0;
};

struct Report {
    SuiteConfig config;
    std::vector<CheckRecord> checks;

    std::size_t passed() const;
    std::size_t failed() const;
    nlohmann::json to_json() const;
};

Report run_suite(const SuiteConfig& cfg);

/// Report JSON without wall times and version stamp, for reproducibility checks.
nlohmann::json report_body(const nlohmann::json& report);

std::string format_text(const Report& report);

/// Writes JSON or text to `path` (standard output when empty or "-"). Throws IoError.
void emit_report(const Report& report, const std::string& format, const std::string& path);

/// 0 when every check passed, 1 otherwise.
int exit_code(const Report& report);

} // namespace superbethe
