// Batch verifier: runs the selected suites and writes a JSON or text report.
// Exit status 0 when every check passed, 1 on a failing check, 2 on bad configuration.
#include <iostream>

#include "superbethe/harness.hpp"

int main(int argc, char** argv) {
    using namespace superbethe;
    SuiteConfig cfg;
    try {
        std::string help;
        if (!parse_config(std::vector<std::string>(argv + 1, argv + argc), cfg, help)) {
            std::cout << help;
            return 0;
        }
        const Report report = run_suite(cfg);
        emit_report(report, cfg.format, cfg.out);
        if (cfg.format == "json" && !cfg.out.empty() && cfg.out != "-")
            std::cerr << report.passed() << "/" << report.checks.size() << " checks passed\n";
        return exit_code(report);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 2;
    }
}
