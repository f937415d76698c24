#include "ntcheck/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ntcheck/errors.hpp"

#ifndef NTCHECK_VERSION
#define NTCHECK_VERSION "unknown"
#endif

namespace ntcheck {

namespace {

std::string csv_cell(const ojson& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    }
    return v.dump();
}

}  // namespace

int RunReport::n_failures() const {
    return int(std::count_if(cases.begin(), cases.end(), [](const Case& c) { return !c.pass; }));
}

double RunReport::max_rel_err() const {
    double m = 0.0;
    for (const auto& c : cases)
        if (c.rel_err) m = std::max(m, *c.rel_err);
    return m;
}

const Case* RunReport::worst_case() const {
    const Case* best = nullptr;
    auto key = [](const Case& c) { return std::pair{!c.pass, c.rel_err.value_or(-1.0)}; };
    for (const auto& c : cases)
        if ((c.rel_err || !c.pass) && (!best || key(*best) < key(c))) best = &c;
    return best;
}

ojson RunReport::to_json() const {
    ojson j;
    j["suite"] = suite;
    j["command"] = command;
    j["version"] = version_string();
    j["config"] = config;
    j["n_cases"] = cases.size();
    j["n_failures"] = n_failures();
    j["max_rel_err"] = max_rel_err();
    j["wall_ms"] = wall_ms;
    const Case* w = worst_case();
    j["worst_case"] = w ? ojson(w->id) : ojson(nullptr);
    j["summary"] = summary;
    ojson rows = ojson::array();
    for (const auto& c : cases) {
        ojson r;
        r["id"] = c.id;
        r["pass"] = c.pass;
        r["rel_err"] = c.rel_err ? ojson(*c.rel_err) : ojson(nullptr);
        for (auto it = c.fields.begin(); it != c.fields.end(); ++it) r[it.key()] = it.value();
        rows.push_back(std::move(r));
    }
    j["cases"] = std::move(rows);
    return j;
}

std::string RunReport::to_csv() const {
    std::vector<std::string> cols;
    for (const auto& c : cases)
        for (auto it = c.fields.begin(); it != c.fields.end(); ++it)
            if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
    std::ostringstream os;
    os << "id,pass,rel_err";
    for (const auto& k : cols) os << ',' << k;
    os << '\n';
    for (const auto& c : cases) {
        os << csv_cell(c.id) << ',' << (c.pass ? 1 : 0) << ',' << (c.rel_err ? ojson(*c.rel_err).dump() : "");
        for (const auto& k : cols) os << ',' << (c.fields.contains(k) ? csv_cell(c.fields[k]) : "");
        os << '\n';
    }
    return os.str();
}

const char* version_string() { return NTCHECK_VERSION; }

void write_report(const RunReport& r, const std::filesystem::path& dir, const std::string& stem, bool csv_only) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary);
        f << text;
        if (!f) throw ConfigError("cannot write " + (dir / name).string());
    };
    if (!csv_only) put(stem + ".json", r.to_json().dump(2) + "\n");
    put(stem + ".csv", r.to_csv());
}

}  // namespace ntcheck
