/// @file suites.hpp
/// Verification suites and parameter scans behind the command-line tool.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ntcheck/report.hpp"

namespace ntcheck {

enum class Command { Verify, Scan };

const char* to_string(Command c);

using KeyValues = std::map<std::string, std::string>;

struct SuiteConfig {
    Command command = Command::Verify;
    std::string suite;
    KeyValues file;   ///< from the config file
    KeyValues flags;  ///< from the command line
};

/// Suites available for a command, in a fixed order.
std::vector<std::string> suite_names(Command c);

/// Defaults of a suite; every accepted key appears here. Throws ConfigError
/// for an unknown suite.
KeyValues suite_defaults(Command c, const std::string& suite);

/// Flat "key = value" lines. Blank lines and lines starting with '#' are
/// skipped; a leading "--" on keys is allowed.
KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::filesystem::path& path);

/// defaults < config file < flags. Unknown keys throw ConfigError.
KeyValues resolve_config(const SuiteConfig& cfg);

/// Runs a suite. Throws ConfigError on bad configuration; the report's
/// config field holds the resolved key-value pairs.
RunReport run_suite(const SuiteConfig& cfg);

/// Parses "log:a:b:n", "lin:a:b:n" or a comma list. Throws ConfigError on an
/// empty or malformed grid.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace ntcheck
