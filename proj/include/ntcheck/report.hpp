/// @file report.hpp
/// Run reports and their JSON / CSV serialisation.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ntcheck {

using ojson = nlohmann::ordered_json;

struct Case {
    std::string id;
    ojson fields = ojson::object();  ///< parameters and measured values, in column order
    bool pass = true;
    std::optional<double> rel_err;  ///< absent for range and bound checks
};

struct RunReport {
    std::string suite;
    std::string command;             ///< "verify" or "scan"
    ojson config = ojson::object();  ///< fully resolved configuration
    std::vector<Case> cases;
    ojson summary = ojson::object();  ///< suite-level aggregates (max, median, ...)
    double wall_ms = 0.0;

    int n_failures() const;
    double max_rel_err() const;
    /// Failing case with the largest rel_err, else the passing one with the
    /// largest rel_err; nullptr when no case carries one.
    const Case* worst_case() const;

    ojson to_json() const;
    /// One row per case: id, pass, rel_err, then the union of field names in
    /// order of first appearance.
    std::string to_csv() const;
};

/// git describe string baked in at build time.
const char* version_string();

/// Writes <dir>/<stem>.json (unless csv_only) and <dir>/<stem>.csv. Throws
/// ConfigError when the directory cannot be created or written.
void write_report(const RunReport& r, const std::filesystem::path& dir, const std::string& stem, bool csv_only);

}  // namespace ntcheck
