// ntcheck: command-line front end for the verification suites and scans.
//
//   ntcheck (verify|scan) <suite> [--out DIR] [--seed INT] [--tol FLOAT]
//           [--jobs INT] [--config FILE] [--reproducible] [--<key> VALUE ...]
//
// Exit codes: 0 all cases pass, 1 some case fails, 2 configuration error.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ntcheck/errors.hpp"
#include "ntcheck/suites.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string list(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

// Suite-specific options arrive as "--key value" or "--key=value".
ntcheck::KeyValues extra_flags(const std::vector<std::string>& args) {
    ntcheck::KeyValues out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() == 2) throw ntcheck::ConfigError("unexpected argument '" + a + "'");
        const auto eq = a.find('=');
        if (eq != std::string::npos) {
            out[a.substr(2, eq - 2)] = a.substr(eq + 1);
        } else {
            if (i + 1 >= args.size()) throw ntcheck::ConfigError("option " + a + " needs a value");
            out[a.substr(2)] = args[++i];
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for quadratic character sums, Dirichlet series and oscillatory integrals"};
    app.allow_extras();
    std::string command, suite, out_dir = "out", config_path, seed, tol, jobs;
    bool reproducible = false;
    app.add_option("command", command, "verify or scan")->required();
    app.add_option("suite", suite, "verify: " + list(ntcheck::suite_names(ntcheck::Command::Verify)) +
                                       "; scan: " + list(ntcheck::suite_names(ntcheck::Command::Scan)))
        ->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--tol", tol, "main tolerance of the suite");
    app.add_option("--jobs", jobs, "worker threads");
    app.add_option("--config", config_path, "key = value file; flags take precedence");
    app.add_flag("--reproducible", reproducible, "write wall_ms as 0 so reruns are byte-identical");
    app.footer("Any other --key VALUE pair sets a suite option; see README.md for the keys of each suite.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        ntcheck::SuiteConfig cfg;
        if (command == "verify")
            cfg.command = ntcheck::Command::Verify;
        else if (command == "scan")
            cfg.command = ntcheck::Command::Scan;
        else
            throw ntcheck::ConfigError("unknown command '" + command + "' (expected verify or scan)");
        cfg.suite = suite;
        if (!config_path.empty()) cfg.file = ntcheck::read_config_file(config_path);
        cfg.flags = extra_flags(app.remaining());
        if (!seed.empty()) cfg.flags["seed"] = seed;
        if (!tol.empty()) cfg.flags["tol"] = tol;
        if (!jobs.empty()) cfg.flags["jobs"] = jobs;

        ntcheck::RunReport r = ntcheck::run_suite(cfg);
        if (reproducible) r.wall_ms = 0.0;
        const bool scan = cfg.command == ntcheck::Command::Scan;
        ntcheck::write_report(r, out_dir, scan ? "scan_" + suite : suite, scan);

        std::printf("%s %s: %zu cases, %d failures, max_rel_err %.3g, %.0f ms\n", command.c_str(), suite.c_str(),
                    r.cases.size(), r.n_failures(), r.max_rel_err(), r.wall_ms);
        for (auto it = r.summary.begin(); it != r.summary.end(); ++it)
            std::printf("  %s = %s\n", it.key().c_str(), it.value().dump().c_str());
        for (const auto& c : r.cases)
            if (!c.pass) std::printf("  FAIL %s\n", c.id.c_str());
        return r.n_failures() == 0 ? 0 : kExitFail;
    } catch (const ntcheck::ConfigError& e) {
        std::fprintf(stderr, "ntcheck: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ntcheck: error: %s\n", e.what());
        return kExitFail;
    }
}
