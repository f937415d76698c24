#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ntcheck/errors.hpp"
#include "ntcheck/suites.hpp"

using namespace ntcheck;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(NTCHECK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ntcheck_cli_" + name);
    fs::remove_all(p);
    return p;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("grid and config parsing") {
    CHECK(parse_grid("lin:0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
    const auto g = parse_grid("log:1e2:1e6:40");
    CHECK(g.size() == 40);
    CHECK(g.front() == doctest::Approx(100.0));
    CHECK(g.back() == doctest::Approx(1e6));
    CHECK(parse_grid("3, 5,7") == std::vector<double>{3, 5, 7});
    CHECK_THROWS_AS(parse_grid("log:1e2:1e6:0"), ConfigError);
    CHECK_THROWS_AS(parse_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_grid("log:-1:5:3"), ConfigError);
    CHECK_THROWS_AS(parse_grid("cubic:1:2:3"), ConfigError);

    const KeyValues kv = parse_config_text("# comment\n\n moduli = 16,48\n--tol=1e-9\n");
    CHECK(kv.at("moduli") == "16,48");
    CHECK(kv.at("tol") == "1e-9");
    CHECK_THROWS_AS(parse_config_text("no equals sign"), ConfigError);
}

TEST_CASE("config precedence: flags over file over defaults") {
    SuiteConfig cfg;
    cfg.suite = "poisson";
    cfg.file = {{"moduli", "16,48"}, {"tol", "1e-3"}};
    cfg.flags = {{"tol", "1e-9"}};
    const KeyValues kv = resolve_config(cfg);
    CHECK(kv.at("moduli") == "16,48");
    CHECK(kv.at("tol") == "1e-9");
    CHECK(kv.at("shapes") == "3");
    cfg.flags["bogus"] = "1";
    CHECK_THROWS_AS(resolve_config(cfg), ConfigError);
    cfg.suite = "nope";
    CHECK_THROWS_AS(resolve_config(cfg), ConfigError);
}

TEST_CASE("report serialisation") {
    RunReport r;
    r.suite = "x";
    Case a;
    a.id = "first, quoted";
    a.fields["v"] = 1.5;
    a.rel_err = 1e-3;
    Case b;
    b.id = "second";
    b.pass = false;
    b.fields["w"] = "s";
    r.cases = {a, b};
    CHECK(r.n_failures() == 1);
    CHECK(r.max_rel_err() == 1e-3);
    CHECK(r.worst_case()->id == "second");
    CHECK(r.to_csv() == "id,pass,rel_err,v,w\n\"first, quoted\",1,0.001,1.5,\nsecond,0,,,s\n");
    const auto j = r.to_json();
    for (const char* k : {"suite", "version", "config", "n_cases", "n_failures", "max_rel_err", "wall_ms", "cases"})
        CHECK(j.contains(k));
}

TEST_CASE("cli exit codes") {
    const fs::path out = scratch("codes");
    const std::string o = " --out " + out.string();
    CHECK(run("verify nosuchsuite" + o) == 2);
    CHECK(run("frobnicate poisson" + o) == 2);
    CHECK(run("verify poisson --no-such-option 3" + o) == 2);
    CHECK(run("verify poisson --moduli 24" + o) == 2);
    CHECK(run("verify poisson --tol -1" + o) == 2);
    CHECK(run("verify poisson --seed banana" + o) == 2);
    CHECK(run("scan kplus --x-grid log:1e2:1e6:0" + o) == 2);
    CHECK(run("verify poisson --moduli 16 --out /proc/ntcheck_unwritable") == 2);
    CHECK(run("verify poisson --moduli 16 --shapes 1 --tol 1e-300" + o) == 1);
    CHECK(run("verify") == 2);
}

TEST_CASE("cli verify poisson writes a passing report") {
    const fs::path out = scratch("poisson");
    REQUIRE(run("verify poisson --moduli 16,48,80 --shapes 3 --tol 1e-8 --out " + out.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(out / "poisson.json"));
    CHECK(j["suite"] == "poisson");
    CHECK(j["n_failures"] == 0);
    CHECK(j["n_cases"] == 9 + 9);
    CHECK(j["config"]["moduli"] == "16,48,80");
    CHECK(j["config"]["tol"] == "1e-8");
    CHECK(j["max_rel_err"].get<double>() < 1e-8);
    CHECK(count_lines(slurp(out / "poisson.csv")) == 1 + 18);
}

TEST_CASE("cli config file and flags") {
    const fs::path out = scratch("config");
    fs::create_directories(out);
    {
        std::ofstream f(out / "run.cfg");
        f << "moduli = 16\nshapes = 2\ntol = 1e-300\n";
    }
    const std::string base = "verify poisson --config " + (out / "run.cfg").string() + " --out " + out.string();
    CHECK(run(base) == 1);
    CHECK(run(base + " --tol 1e-8") == 0);
    const auto j = nlohmann::json::parse(slurp(out / "poisson.json"));
    CHECK(j["config"]["shapes"] == "2");
    CHECK(j["config"]["tol"] == "1e-8");
    CHECK(run("verify poisson --config " + (out / "missing.cfg").string() + " --out " + out.string()) == 2);
}

TEST_CASE("cli scans: row counts and determinism") {
    const fs::path a = scratch("scan_a"), b = scratch("scan_b");
    REQUIRE(run("scan kplus --T 100 --Delta 10 --x-grid log:1e2:1e3:40 --out " + a.string()) == 0);
    CHECK(count_lines(slurp(a / "scan_kplus.csv")) == 41);
    CHECK_FALSE(fs::exists(a / "scan_kplus.json"));

    const std::string sieve = "scan sieve --M 128 --N 96 --trials 7 --seed 5 --out ";
    REQUIRE(run(sieve + a.string()) == 0);
    REQUIRE(run(sieve + b.string() + " --jobs 3") == 0);
    CHECK(slurp(a / "scan_sieve.csv") == slurp(b / "scan_sieve.csv"));
}

TEST_CASE("cli determinism") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const auto& dir : {a, b}) {
        REQUIRE(run("scan sieve --M 128 --N 96 --trials 7 --seed 5 --out " + dir.string()) == 0);
        REQUIRE(run("verify poisson --moduli 16,48 --reproducible --out " + dir.string()) == 0);
    }
    CHECK(slurp(a / "scan_sieve.csv") == slurp(b / "scan_sieve.csv"));
    CHECK(count_lines(slurp(a / "scan_sieve.csv")) == 8);
    CHECK(slurp(a / "poisson.json") == slurp(b / "poisson.json"));
    CHECK(slurp(a / "poisson.csv") == slurp(b / "poisson.csv"));

    const fs::path c = scratch("det_c");
    REQUIRE(run("scan sieve --M 128 --N 96 --trials 7 --seed 6 --out " + c.string()) == 0);
    CHECK(slurp(a / "scan_sieve.csv") != slurp(c / "scan_sieve.csv"));
}
