#include "ntcheck/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ntcheck/charsums.hpp"
#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"
#include "ntcheck/oscillatory.hpp"
#include "ntcheck/poisson.hpp"
#include "ntcheck/sieve.hpp"
#include "ntcheck/zseries.hpp"

namespace ntcheck {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

// Typed access to the resolved key-value configuration.
class Params {
public:
    explicit Params(const KeyValues& kv) : kv_(kv) {}

    const std::string& str(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("missing key '" + key + "'");
        return it->second;
    }

    double real(const std::string& key, double lo, double hi) const { return check(key, to_real(key, str(key)), lo, hi); }

    i64 integer(const std::string& key, i64 lo, i64 hi) const {
        return i64(check(key, double(to_int(key, str(key))), double(lo), double(hi)));
    }

    std::uint64_t seed() const {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(str("seed"), &used);
            if (used != str("seed").size() || str("seed").find('-') != std::string::npos) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("--seed must be a non-negative integer");
        }
    }

    int jobs() const { return int(integer("jobs", 1, 256)); }

    std::vector<i64> integers(const std::string& key, i64 lo, i64 hi) const {
        std::vector<i64> out;
        for (const auto& w : split(str(key), ','))
            if (!w.empty()) out.push_back(i64(check(key, double(to_int(key, w)), double(lo), double(hi))));
        if (out.empty()) throw ConfigError("--" + key + ": empty list");
        return out;
    }

    std::vector<double> reals(const std::string& key, double lo, double hi) const {
        std::vector<double> out;
        for (const auto& w : split(str(key), ','))
            if (!w.empty()) out.push_back(check(key, to_real(key, w), lo, hi));
        if (out.empty()) throw ConfigError("--" + key + ": empty list");
        return out;
    }

    std::vector<std::string> words(const std::string& key, const std::vector<std::string>& allowed) const {
        std::vector<std::string> out;
        for (const auto& w : split(str(key), ',')) {
            if (w.empty()) continue;
            if (std::find(allowed.begin(), allowed.end(), w) == allowed.end())
                throw ConfigError("--" + key + ": unknown value '" + w + "'");
            out.push_back(w);
        }
        if (out.empty()) throw ConfigError("--" + key + ": empty list");
        return out;
    }

private:
    static double to_real(const std::string& key, const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size() && std::isfinite(v)) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("--" + key + ": '" + s + "' is not a number");
    }
    static i64 to_int(const std::string& key, const std::string& s) {
        const double v = to_real(key, s);
        if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError("--" + key + ": '" + s + "' is not an integer");
        return i64(v);
    }
    static double check(const std::string& key, double v, double lo, double hi) {
        if (!(v >= lo && v <= hi)) {
            std::ostringstream os;
            os << "--" << key << ": " << v << " outside [" << lo << ", " << hi << "]";
            throw ConfigError(os.str());
        }
        return v;
    }

    const KeyValues& kv_;
};

void put(ojson& f, const std::string& name, cplx z) {
    f[name + "_re"] = z.real();
    f[name + "_im"] = z.imag();
}

Case judged(std::string id, double err, double tol, ojson fields = ojson::object()) {
    Case c;
    c.id = std::move(id);
    c.rel_err = err;
    c.pass = err <= tol;  // NaN fails
    c.fields = std::move(fields);
    return c;
}

Case bounded(std::string id, bool ok, ojson fields) {
    Case c;
    c.id = std::move(id);
    c.pass = ok;
    c.fields = std::move(fields);
    return c;
}

template <class Fn>
std::vector<Case> run_cases(std::size_t n, int jobs, Fn fn) {
    std::vector<Case> out(n);
    parallel_for(n, jobs, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

std::string pad(i64 v, int width) {
    std::string s = std::to_string(v);
    return std::string(std::size_t(std::max<int>(0, width - int(s.size()))), '0') + s;
}

// ---- charsums ----

const std::vector<std::string> kCharsumParts = {"t", "gauss", "ap"};

Case t_case(i64 c, std::uint64_t seed, i64 rand_pairs, i64 block, double tol) {
    const FactoredModulus fm = factor_modulus(c);
    const double scale = std::pow(double(c), 1.5);
    Rng rng(seed, std::uint64_t(c));
    std::vector<std::pair<i64, i64>> pairs;
    for (i64 a = -block; a <= block; ++a)
        for (i64 b = -block; b <= block; ++b) pairs.push_back({a, b});
    std::vector<i64> admissible_g;
    for (i64 g : divisors(c))
        if (g % 4 == 0) admissible_g.push_back(g);
    for (i64 i = 0; i < rand_pairs; ++i) {
        if (i % 2 == 0) {
            pairs.push_back({rng.integer(-c, c), rng.integer(-c, c)});
            continue;
        }
        // (a, c) = (b, c) = g with 4 | g: the only pairs where T can be nonzero.
        const i64 g = admissible_g[std::size_t(rng.integer(0, i64(admissible_g.size()) - 1))];
        const i64 cg = c / g;
        auto unit = [&] {
            if (cg == 1) return i64(0);
            for (;;) {
                const i64 u = rng.integer(1, cg - 1);
                if (gcd(u, cg) == 1) return u;
            }
        };
        const i64 u = unit(), v = unit();
        pairs.push_back({g * u, g * v});
    }
    double worst = 0.0;
    i64 nonzero = 0, zero_mismatch = 0;
    for (auto [a, b] : pairs) {
        const SumValue o = t_sum_oracle(a, b, c);
        const SumValue cl = t_sum_closed(a, b, fm);
        worst = std::max(worst, rel_err(cl.value, o.value, scale));
        const bool oracle_zero = o.is_exact_zero || std::abs(o.value) <= 1e-9 * scale;
        if (cl.is_exact_zero != oracle_zero) ++zero_mismatch;
        nonzero += !cl.is_exact_zero;
    }
    ojson f;
    f["part"] = "t";
    f["c"] = c;
    f["j"] = fm.j;
    f["pairs"] = pairs.size();
    f["nonzero"] = nonzero;
    f["zero_mismatches"] = zero_mismatch;
    Case out = judged("t c=" + pad(c, 4), worst, tol, f);
    out.pass = out.pass && zero_mismatch == 0;
    return out;
}

Case gauss_block_case(i64 lo, i64 hi, std::uint64_t seed, i64 samples, double tol) {
    double worst = 0.0;
    i64 checks = 0;
    for (i64 c = lo; c <= hi; ++c) {
        if (c % 4 == 2) continue;
        Rng rng(seed, std::uint64_t(c));
        for (i64 s = 0; s < samples; ++s) {
            i64 a = 1;
            if (c > 1)
                do a = rng.integer(1, c - 1);
                while (gcd(a, c) != 1);
            worst = std::max(worst, rel_err(gauss_sum_closed(a, c).value, gauss_sum_oracle(a, c).value,
                                            std::sqrt(double(c))));
            ++checks;
        }
    }
    ojson f;
    f["part"] = "gauss";
    f["c_lo"] = lo;
    f["c_hi"] = hi;
    f["checks"] = checks;
    return judged("gauss c=" + pad(lo, 4) + ".." + pad(hi, 4), worst, tol, f);
}

Case gauss_mult_case(std::uint64_t seed, i64 n_pairs, double tol) {
    Rng rng(seed, 0x6d756c74);
    auto G = [](i64 a, i64 c) { return c % 4 == 2 ? gauss_sum_oracle(a, c).value : gauss_sum_closed(a, c).value; };
    double worst = 0.0;
    for (i64 done = 0; done < n_pairs;) {
        const i64 c1 = rng.integer(1, 200), c2 = rng.integer(1, 200);
        if (gcd(c1, c2) != 1) continue;
        i64 a;
        do a = rng.integer(1, c1 * c2);
        while (gcd(a, c1 * c2) != 1);
        const cplx lhs = gauss_sum_oracle(a, c1 * c2).value;
        const cplx rhs = G(mod(a * c2, c1), c1) * G(mod(a * c1, c2), c2);
        worst = std::max(worst, rel_err(rhs, lhs, std::sqrt(double(c1 * c2))));
        ++done;
    }
    ojson f;
    f["part"] = "gauss";
    f["pairs"] = n_pairs;
    return judged("gauss multiplicativity", worst, tol, f);
}

Case ap_block_case(i64 lo, i64 hi) {
    i64 checks = 0, mismatches = 0, characters = 0;
    for (i64 q = lo; q <= hi; ++q) {
        std::vector<i64> odd, all;
        for (auto [p, e] : factorize(q)) {
            all.push_back(p);
            if (p % 2) odd.push_back(p);
        }
        const auto divs = divisors(q);
        for (unsigned mask = 0; mask < (1u << odd.size()); ++mask) {
            i64 qs = 1;
            for (std::size_t i = 0; i < odd.size(); ++i)
                if (mask >> i & 1) qs *= odd[i];
            i64 q0 = 1;
            for (i64 p : all)
                if (qs % p) q0 *= p;
            const RealCharacter chi{q, qs, q0};
            ++characters;
            for (i64 d : divs)
                for (i64 a = 0; a < d; ++a) {
                    if (gcd(a, d) != 1) continue;
                    ++checks;
                    mismatches += char_sum_ap_exact(chi, a, d) != char_sum_ap_direct(chi, a, d);
                }
        }
    }
    ojson f;
    f["part"] = "ap";
    f["q_lo"] = lo;
    f["q_hi"] = hi;
    f["characters"] = characters;
    f["checks"] = checks;
    f["mismatches"] = mismatches;
    Case c = bounded("ap q=" + pad(lo, 4) + ".." + pad(hi, 4), mismatches == 0, f);
    c.rel_err = mismatches == 0 ? 0.0 : 1.0;
    return c;
}

RunReport verify_charsums(const Params& P) {
    const auto seed = P.seed();
    const int jobs = P.jobs();
    const auto parts = P.words("parts", kCharsumParts);
    RunReport r;
    auto want = [&](const char* p) { return std::find(parts.begin(), parts.end(), p) != parts.end(); };

    if (want("t")) {
        const i64 c_max = P.integer("c-max", 16, kTOracleMaxModulus);
        const auto js = P.integers("j", 4, 12);
        const i64 rand_pairs = P.integer("rand-pairs", 0, 100000), block = P.integer("block", 0, 64);
        const double tol = P.real("tol", 0.0, 1.0);
        std::vector<i64> moduli;
        for (i64 j : js)
            for (i64 co = 1; (co << j) <= c_max; co += 2) moduli.push_back(co << j);
        std::sort(moduli.begin(), moduli.end());
        moduli.erase(std::unique(moduli.begin(), moduli.end()), moduli.end());
        if (moduli.empty()) throw ConfigError("charsums: no moduli 2^j c_o <= c-max");
        auto cs = run_cases(moduli.size(), jobs, [&](std::size_t i) { return t_case(moduli[i], seed, rand_pairs, block, tol); });
        r.cases.insert(r.cases.end(), cs.begin(), cs.end());
    }
    if (want("gauss")) {
        const i64 c_max = P.integer("gauss-c-max", 1, 1 << 16), samples = P.integer("gauss-samples", 1, 10000);
        const double tol = P.real("gauss-tol", 0.0, 1.0);
        const i64 width = 256, blocks = (c_max + width - 1) / width;
        auto cs = run_cases(std::size_t(blocks), jobs, [&](std::size_t b) {
            const i64 lo = i64(b) * width + 1;
            return gauss_block_case(lo, std::min(c_max, lo + width - 1), seed, samples, tol);
        });
        r.cases.insert(r.cases.end(), cs.begin(), cs.end());
        r.cases.push_back(gauss_mult_case(seed, P.integer("mult-pairs", 0, 100000), tol));
    }
    if (want("ap")) {
        const i64 q_max = P.integer("ap-q-max", 1, 5000), width = 100;
        const i64 blocks = (q_max + width - 1) / width;
        auto cs = run_cases(std::size_t(blocks), jobs, [&](std::size_t b) {
            const i64 lo = i64(b) * width + 1;
            return ap_block_case(lo, std::min(q_max, lo + width - 1));
        });
        r.cases.insert(r.cases.end(), cs.begin(), cs.end());
    }
    return r;
}

// ---- zseries ----

SeriesPoint random_point(Rng& rng, double lo, double hi) {
    auto u = [&] { return cplx(rng.uniform(lo, hi), rng.uniform(-5, 5)); };
    const cplx s(0.0, rng.uniform(-3, 3));
    const cplx u1 = u(), u2 = u(), u3 = u();
    return SeriesPoint(s, u1, u2, u3, rng.uniform(0, 4));
}

std::vector<SeriesPoint> d0_points(std::uint64_t seed, std::uint64_t stream, i64 n, double lo, double hi,
                                   double margin) {
    Rng rng(seed, stream);
    std::vector<SeriesPoint> pts;
    while (i64(pts.size()) < n) {
        SeriesPoint pt = random_point(rng, lo, hi);
        if (domain_contains(Domain::D0, pt, margin)) pts.push_back(pt);
    }
    return pts;
}

RunReport verify_zseries_local(const Params& P) {
    const double tol = P.real("tol", 0.0, 1.0), margin = P.real("margin", 0.0, 1.0);
    const i64 p_max = P.integer("p-max", 3, 10000);
    const auto pts = d0_points(P.seed(), 1, P.integer("points", 1, 1000), 1.0 + margin, 3.0, margin);
    std::vector<i64> primes;
    for (i64 p = 3; p <= p_max; p += 2)
        if (is_squarefree(p) && factorize(p).size() == 1) primes.push_back(p);
    RunReport r;
    r.cases = run_cases(primes.size(), P.jobs(), [&](std::size_t i) {
        const i64 p = primes[i];
        double worst = 0.0, oracle_err = 0.0;
        for (const auto& pt : pts) {
            for (int chi : {-1, 1}) {
                const Estimate o = local_factor_oracle(p, chi, pt);
                const cplx c = local_factor_unramified(p, chi, pt);
                worst = std::max({worst, rel_err(c, o.value), rel_err(local_factor_uncancelled(p, chi, pt), o.value)});
                oracle_err = std::max(oracle_err, o.error / std::abs(o.value));
            }
            const Estimate o = local_factor_oracle(p, 0, pt);
            worst = std::max(worst, rel_err(local_factor_ramified(p, pt), o.value));
            oracle_err = std::max(oracle_err, o.error / std::abs(o.value));
        }
        ojson f;
        f["p"] = p;
        f["points"] = pts.size();
        f["oracle_tail"] = oracle_err;
        Case c = judged("p=" + pad(p, 4), worst, tol, f);
        c.pass = c.pass && oracle_err <= tol;
        return c;
    });
    return r;
}

RunReport verify_zseries_global(const Params& P) {
    const auto seed = P.seed();
    const int jobs = P.jobs();
    const double tol = P.real("tol", 0.0, 1.0);
    const i64 kl_max = P.integer("kl-max", 1, 99);
    ZOracleCutoff cutoff;
    cutoff.q_max = P.integer("q-max", 1000, 2000000000);
    const auto pts = d0_points(seed, 2, P.integer("points", 1, 100), 2.0, 3.0, 0.0);

    std::vector<std::pair<i64, i64>> pairs;
    for (i64 k : odd_squarefree_up_to(kl_max))
        for (i64 l : odd_squarefree_up_to(kl_max)) pairs.push_back({k, l});
    std::vector<std::vector<Estimate>> oracle(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t i) { oracle[i] = z_kl_oracle_batch(pairs, pts[i], Mod8Twist::None, cutoff); });

    RunReport r;
    auto kl = run_cases(pairs.size(), jobs, [&](std::size_t i) {
        auto [k, l] = pairs[i];
        double worst = 0.0, oracle_err = 0.0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const Estimate p = z_kl_product(k, l, pts[j]);
            const Estimate& o = oracle[j][i];
            worst = std::max(worst, rel_err(p.value, o.value));
            oracle_err = std::max(oracle_err, o.error / std::abs(o.value));
        }
        ojson f;
        f["k"] = k;
        f["l"] = l;
        f["points"] = pts.size();
        f["oracle_tail"] = oracle_err;
        return judged("zkl k=" + pad(k, 2) + " l=" + pad(l, 2), worst, tol, f);
    });
    r.cases.insert(r.cases.end(), kl.begin(), kl.end());

    // Z^(2): closed forms against the triple sums, then head + tail = full.
    const double z2_tol = P.real("z2-tol", 0.0, 1.0), split_tol = P.real("split-tol", 0.0, 1.0);
    const auto zpts = d0_points(seed, 3, P.integer("z2-points", 1, 100), 2.0, 3.0, 0.0);
    struct Z2Spec {
        Z2Case cs;
        int delta;
        Z2Part part;
        std::optional<int> L;
    };
    std::vector<Z2Spec> specs;
    for (auto cs : {Z2Case::I, Z2Case::II, Z2Case::III, Z2Case::IV})
        for (int delta : {0, 1})
            for (auto part : {Z2Part::Full, Z2Part::Head, Z2Part::Tail})
                for (std::optional<int> L : {std::optional<int>{}, std::optional<int>{3}, std::optional<int>{7}})
                    specs.push_back({cs, delta, part, L});
    const char* part_name[] = {"full", "head", "tail"};
    auto z2 = run_cases(specs.size(), jobs, [&](std::size_t i) {
        const Z2Spec& s = specs[i];
        double worst = 0.0;
        for (const auto& pt : zpts) {
            const Z2Query q{s.cs, s.delta, s.part, s.L};
            const cplx c = z2_closed(q, pt);
            const cplx full = z2_closed({s.cs, s.delta, Z2Part::Full, {}}, pt);
            const Estimate o = z2_oracle(q, pt);
            // Head and tail pieces are measured against the size of the full series.
            worst = std::max(worst, (std::abs(c - o.value) + o.error) / std::max(std::abs(c), std::abs(full)));
        }
        ojson f;
        f["case"] = to_string(s.cs);
        f["delta"] = s.delta;
        f["part"] = part_name[int(s.part)];
        f["L"] = s.L ? ojson(*s.L) : ojson("inf");
        return judged(std::string("z2 ") + to_string(s.cs) + " d=" + std::to_string(s.delta) + " " +
                          part_name[int(s.part)] + " L=" + (s.L ? std::to_string(*s.L) : "inf"),
                      worst, z2_tol, f);
    });
    r.cases.insert(r.cases.end(), z2.begin(), z2.end());

    double split = 0.0;
    for (const auto& pt : zpts)
        for (auto cs : {Z2Case::I, Z2Case::II, Z2Case::III, Z2Case::IV})
            for (int delta : {0, 1}) {
                const cplx full = z2_closed({cs, delta, Z2Part::Full, {}}, pt);
                for (int L = 3; L <= 12; ++L) {
                    const cplx h = z2_closed({cs, delta, Z2Part::Head, L}, pt);
                    const cplx t = z2_closed({cs, delta, Z2Part::Tail, L}, pt);
                    split = std::max(split, std::abs(h + t - full) / std::abs(full));
                }
            }
    ojson f;
    f["L_range"] = "3..12";
    r.cases.push_back(judged("z2 split", split, split_tol, f));
    return r;
}

// ---- oscillatory ----

const std::vector<std::string> kOscParts = {"phase", "magnitude", "kplus", "mellin"};

RunReport verify_oscillatory(const Params& P) {
    const auto parts = P.words("parts", kOscParts);
    auto want = [&](const char* p) { return std::find(parts.begin(), parts.end(), p) != parts.end(); };
    const int jobs = P.jobs();
    RunReport r;

    if (want("phase")) {
        const double tol = P.real("tol", 0.0, 1.0), ttol = P.real("target-tol", 0.0, 1.0);
        const double odd_tol = P.real("odd-tol", 0.0, 1.0);
        const auto t1 = phase_taylor(Regime::UDominant, 0.1, 1);
        const double coef = std::max(std::abs(t1.c[0] - 1.0), std::abs(t1.c[1] + 1.0 / 3.0));
        ojson f;
        f["c0"] = t1.c[0];
        f["c1"] = t1.c[1];
        r.cases.push_back(judged("regime1 coefficients", coef, tol, f));

        const double r0 = regime1_r0(0.1), r0_target = P.real("r0-target", 0.0, 2.0);
        f = ojson::object();
        f["r0"] = r0;
        f["target"] = r0_target;
        Case c = bounded("regime1 r0(0.1)", std::abs(r0 - r0_target) <= ttol, f);
        c.rel_err = std::abs(r0 - r0_target);
        r.cases.push_back(c);

        const double ratio = t1.remainder / phase_taylor(Regime::UDominant, 0.05, 1).remainder;
        const double rt = P.real("ratio-target", 1.0, 1e6), rtol = P.real("ratio-tol", 0.0, 1.0);
        f = ojson::object();
        f["ratio"] = ratio;
        f["target"] = rt;
        r.cases.push_back(bounded("regime1 remainder halving", std::abs(ratio / rt - 1.0) <= rtol, f));

        const double x0 = regime2_x0(0.1), x0_target = P.real("x0-target", 0.0, 2.0);
        f = ojson::object();
        f["x0"] = x0;
        f["target"] = x0_target;
        c = bounded("regime2 x0(0.1)", std::abs(x0 - x0_target) <= ttol, f);
        c.rel_err = std::abs(x0 - x0_target);
        r.cases.push_back(c);

        const auto t2 = phase_taylor(Regime::EpsDominant, 0.1, 3);
        double odd = 0.0;
        for (std::size_t n = 1; n < t2.series.size(); n += 2) odd = std::max(odd, std::abs(t2.series[n]));
        f = ojson::object();
        f["max_odd"] = odd;
        f["terms"] = t2.series.size();
        c = bounded("regime2 odd coefficients", odd <= odd_tol, f);
        r.cases.push_back(c);
    }

    if (want("magnitude")) {
        const double N = P.real("N", 10.0, 1000.0), supp = P.real("suppression", 1.0, 1e12);
        const auto Us = P.reals("u-list", 1.0, 1e4);
        struct Job {
            std::string id;
            OscParams p;
            int kind;  // 0: regime 1 in range, 1: out of range, 2: regime 2
        };
        std::vector<Job> work;
        for (double U : Us) {
            const double eps = 0.1 * U / (N * N), a = U / (1.5 * N);
            work.push_back({"magnitude regime1 U=" + pad(i64(U), 4), {a, a, U, eps, N}, 0});
            work.push_back({"suppression U=" + pad(i64(U), 4), {4 * U / N, 4 * U / N, U, eps, N}, 1});
        }
        {
            // eps N^2 / U = 10 with the critical point at (1.5N, 1.5N).
            const double U = 10.0, eps = 10.0 * U / (N * N), x0 = 1.5 * N, y0 = 1.5 * N;
            work.push_back({"magnitude regime2", {U / x0 - eps * y0, U / y0 + eps * x0, U, eps, N}, 2});
        }
        std::vector<QuadResult> res(work.size());
        parallel_for(work.size(), jobs, [&](std::size_t i) { res[i] = i_integral(work[i].p); });
        for (std::size_t i = 0; i < work.size(); ++i) {
            const Job& w = work[i];
            const double mag = std::abs(res[i].value);
            ojson f;
            f["A"] = w.p.A;
            f["B"] = w.p.B;
            f["U"] = w.p.U;
            f["eps"] = w.p.eps;
            f["N"] = w.p.N;
            f["abs_I"] = mag;
            f["converged"] = res[i].converged;
            bool ok = res[i].converged;
            if (w.kind == 0) {
                f["scaled"] = mag * w.p.U / (N * N);
                ok = ok && mag * w.p.U / (N * N) >= 0.1 && mag * w.p.U / (N * N) <= 10.0;
            } else if (w.kind == 1) {
                const double in = std::abs(res[i - 1].value);
                f["suppression"] = in / mag;
                ok = ok && in >= supp * mag;
            } else {
                f["scaled"] = mag * w.p.eps;
                ok = ok && mag * w.p.eps >= 0.1 && mag * w.p.eps <= 10.0;
            }
            r.cases.push_back(bounded(w.id, ok, f));
        }
    }

    if (want("kplus")) {
        const double T = P.real("T", 10.0, 1000.0), D = P.real("Delta", 1.0, T);
        const double bound = P.real("kplus-ratio", 0.0, 1.0);
        const GWindow g(T, D);
        std::vector<double> xs;
        for (double x = D * T; x <= 10 * D * T * (1 + 1e-12); x *= 1.25) xs.push_back(x);
        std::vector<double> mags(xs.size());
        parallel_for(xs.size(), jobs, [&](std::size_t i) { mags[i] = std::abs(k_plus(xs[i], g).value); });
        const double mx = *std::max_element(mags.begin(), mags.end());
        const double small = std::abs(k_plus(D * T / 10, g).value);
        ojson f;
        f["T"] = T;
        f["Delta"] = D;
        f["small"] = small;
        f["max"] = mx;
        f["ratio"] = small / mx;
        r.cases.push_back(bounded("kplus support", small <= bound * mx, f));
    }

    if (want("mellin")) {
        const double tol = P.real("mellin-tol", 0.0, 1.0);
        const auto Xs = P.reals("mellin-X", 10.0, 1000.0);
        auto cs = run_cases(Xs.size(), jobs, [&](std::size_t i) {
            const double X = Xs[i];
            std::vector<double> grid;
            for (int k = 0; k <= 40; ++k) grid.push_back(X * (0.8 + 1.4 * k / 40.0));
            const MellinReport m = MellinSurrogate(X).report(grid);
            ojson f;
            f["X"] = X;
            f["t_lo"] = m.t_lo;
            f["t_hi"] = m.t_hi;
            f["outside_ratio"] = m.outside_ratio;
            f["scaled_min"] = m.scaled_min;
            f["scaled_max"] = m.scaled_max;
            return judged("mellin X=" + pad(i64(X), 4), m.recon_max_err, tol, f);
        });
        r.cases.insert(r.cases.end(), cs.begin(), cs.end());
    }
    return r;
}

// ---- poisson ----

RunReport verify_poisson(const Params& P) {
    const double tol = P.real("tol", 0.0, 1.0), oracle_tol = P.real("oracle-tol", 0.0, 1.0);
    const auto moduli = P.integers("moduli", 16, 100000);
    const i64 shapes = P.integer("shapes", 1, 3);
    const i64 oracle_max = P.integer("oracle-c-max", 0, kTOracleMaxModulus);
    const int jobs = P.jobs();
    for (i64 c : moduli)
        if (c % 16) throw ConfigError("--moduli: " + std::to_string(c) + " is not divisible by 16");

    struct Job {
        i64 c;
        int shape;
        bool oracle;
    };
    std::vector<Job> work;
    for (i64 c : moduli)
        for (int s = 0; s < shapes; ++s) work.push_back({c, s, false});
    for (i64 c : moduli)
        if (c <= oracle_max)
            for (int s = 0; s < shapes; ++s) work.push_back({c, s, true});

    RunReport r;
    r.cases = run_cases(work.size(), jobs, [&](std::size_t i) {
        const Job& w = work[i];
        ojson f;
        f["c"] = w.c;
        f["shape"] = w.shape;
        if (!w.oracle) {
            const PoissonCase pc = poisson_case(w.c, w.shape);
            put(f, "direct", pc.direct);
            put(f, "dual", pc.dual);
            f["direct_terms"] = pc.direct_box.count();
            f["dual_terms"] = pc.dual_box.count();
            return judged("c=" + pad(w.c, 5) + " shape=" + std::to_string(w.shape), pc.rel_err, tol, f);
        }
        const TestFunction F = standard_shape(w.shape, w.c);
        const cplx a = dual_side(w.c, F, TSource::Closed), b = dual_side(w.c, F, TSource::Oracle);
        put(f, "dual_closed", a);
        put(f, "dual_oracle", b);
        return judged("oracle c=" + pad(w.c, 5) + " shape=" + std::to_string(w.shape), rel_err(a, b), oracle_tol, f);
    });

    if (P.integer("demo", 0, 1)) {
        OffDiagonalConfig cfg;
        cfg.T = P.real("demo-T", 10.0, 200.0);
        cfg.Delta = P.real("demo-Delta", 1.0, cfg.T);
        cfg.U = P.real("demo-U", 0.0, 1000.0);
        cfg.N = P.real("demo-N", 4.0, 400.0);
        cfg.moduli = P.integers("demo-moduli", 16, 4096);
        const OffDiagonalReport rep = off_diagonal_demo(cfg);
        const double dtol = P.real("demo-tol", 0.0, 1.0);
        for (const auto& row : rep.rows) {
            ojson f;
            f["c"] = row.c;
            put(f, "direct", row.direct);
            put(f, "dual", row.dual);
            f["truncation_change"] = row.truncation_change;
            f["kplus_tail"] = row.kplus_tail;
            Case c = judged("demo c=" + pad(row.c, 5), row.rel_err, dtol, f);
            c.pass = c.pass && rep.quadrature_ok;
            r.cases.push_back(c);
        }
    }
    return r;
}

// ---- sieve ----

void sieve_summary(RunReport& r, const SieveReport& s) {
    r.summary["max_ratio"] = s.max_ratio;
    r.summary["median_ratio"] = s.median_ratio;
    r.summary["q90_ratio"] = s.q90_ratio;
    r.summary["max_eps_ratio"] = s.max_eps_ratio;
}

RunReport verify_sieve(const Params& P) {
    SieveScanConfig cfg;
    cfg.M = P.integer("M", 1, kSieveMaxSize);
    cfg.N = P.integer("N", 1, kSieveMaxSize);
    cfg.trials = int(P.integer("trials", 1, 100000));
    cfg.seed = P.seed();
    cfg.jobs = P.jobs();
    const double ratio_max = P.real("tol", 0.0, 1e6), factor = P.real("char-factor", 0.0, 1e6);

    RunReport r;
    const SieveReport g = large_sieve_ratio(cfg);
    sieve_summary(r, g);
    ojson f;
    f["M"] = cfg.M;
    f["N"] = cfg.N;
    f["trials"] = cfg.trials;
    f["max_ratio"] = g.max_ratio;
    f["median_ratio"] = g.median_ratio;
    f["max_eps_ratio"] = g.max_eps_ratio;
    r.cases.push_back(bounded("sieve random_gaussian", g.max_ratio <= ratio_max, f));

    SieveScanConfig sp = cfg;
    sp.mode = CoefficientMode::SingleSpike;
    sp.trials = int(P.integer("spike-trials", 1, 100000));
    const SieveReport s = large_sieve_ratio(sp);
    f["trials"] = sp.trials;
    f["max_ratio"] = s.max_ratio;
    f["median_ratio"] = s.median_ratio;
    f["max_eps_ratio"] = s.max_eps_ratio;
    r.cases.push_back(bounded("sieve single_spike", s.max_ratio < 1.0, f));

    SieveScanConfig ch = cfg;
    ch.mode = CoefficientMode::CharacterSpike;
    const SieveReport cs = large_sieve_ratio(ch);
    f["trials"] = ch.trials;
    f["max_ratio"] = cs.max_ratio;
    f["median_ratio"] = cs.median_ratio;
    f["max_eps_ratio"] = cs.max_eps_ratio;
    f["gaussian_max_ratio"] = g.max_ratio;
    r.cases.push_back(bounded("sieve character_spike", cs.max_ratio <= factor * g.max_ratio, f));

    // Central values against the Euler-Maclaurin oracle.
    const double zeta_tol = P.real("zeta-tol", 0.0, 1.0), l_tol = P.real("lvalue-tol", 0.0, 1.0);
    const cplx z = quadratic_L_value(1, 0.0);
    const cplx zo = riemann_zeta(cplx(0.5, 0.0)).value;
    f = ojson::object();
    put(f, "afe", z);
    put(f, "oracle", zo);
    r.cases.push_back(judged("zeta(1/2)", std::abs(z - zo), zeta_tol, f));

    const auto lm = P.integers("lcheck-m", 1, 50);
    const auto lt = P.reals("lcheck-t", -kLValueMaxHeight, kLValueMaxHeight);
    for (i64 m : lm) {
        if (m % 2 == 0 || !is_squarefree(m)) throw ConfigError("--lcheck-m: " + std::to_string(m) + " is not odd squarefree");
        double worst = 0.0;
        for (double t : lt) {
            const cplx a = quadratic_L_value(m, t);
            const cplx b = dirichlet_l(cplx(0.5, t), [m](i64 n) { return jacobi(n, m); }, m).value;
            worst = std::max(worst, std::abs(a - b));
        }
        f = ojson::object();
        f["m"] = m;
        f["heights"] = lt.size();
        r.cases.push_back(judged("L oracle m=" + pad(m, 2), worst, l_tol, f));
    }

    const auto Ms = P.integers("moment-M", 1, 4000);
    const auto ts = P.reals("moment-t", -kLValueMaxHeight, kLValueMaxHeight);
    const double moment_max = P.real("moment-max", 0.0, 1e6);
    std::vector<std::pair<i64, double>> grid;
    for (double t : ts)
        for (i64 M : Ms) grid.push_back({M, t});
    std::vector<MomentReport> mom(grid.size());
    parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) { mom[i] = weighted_second_moment(grid[i].first, grid[i].second); });
    for (const auto& m : mom) {
        f = ojson::object();
        f["M"] = m.M;
        f["t"] = m.t;
        f["count"] = m.count;
        f["sum"] = m.sum;
        f["raw_ratio"] = m.raw_ratio;
        f["ratio"] = m.ratio;
        std::ostringstream id;
        id << "moment t=" << m.t << " M=" << pad(m.M, 4);
        r.cases.push_back(bounded(id.str(), m.ratio <= moment_max, f));
    }
    return r;
}

// ---- scans ----

RunReport scan_kplus(const Params& P) {
    const double T = P.real("T", 10.0, 1000.0), D = P.real("Delta", 1.0, T);
    const auto xs = parse_grid(P.str("x-grid"));
    for (double x : xs)
        if (!(x > 0 && x <= 1e7)) throw ConfigError("--x-grid: values must lie in (0, 1e7]");
    const GWindow g(T, D);
    RunReport r;
    r.cases = run_cases(xs.size(), P.jobs(), [&](std::size_t i) {
        const QuadResult q = k_plus(xs[i], g);
        ojson f;
        f["x"] = xs[i];
        f["x_over_DT"] = xs[i] / (D * T);
        put(f, "kplus", q.value);
        f["abs"] = std::abs(q.value);
        f["error"] = q.error;
        return bounded("x " + pad(i64(i), 4), q.converged, f);
    });
    double mx = 0.0;
    for (const auto& c : r.cases) mx = std::max(mx, c.fields["abs"].get<double>());
    r.summary["max_abs"] = mx;
    return r;
}

RunReport scan_sieve(const Params& P) {
    SieveScanConfig cfg;
    cfg.M = P.integer("M", 1, kSieveMaxSize);
    cfg.N = P.integer("N", 1, kSieveMaxSize);
    cfg.trials = int(P.integer("trials", 1, 100000));
    cfg.seed = P.seed();
    cfg.jobs = P.jobs();
    cfg.mode = coefficient_mode_from_string(P.str("mode"));
    const SieveReport s = large_sieve_ratio(cfg);
    RunReport r;
    sieve_summary(r, s);
    for (const auto& t : s.trials) {
        ojson f;
        f["M"] = cfg.M;
        f["N"] = cfg.N;
        f["trial"] = t.trial;
        f["lhs"] = t.lhs;
        f["normalizer"] = t.normalizer;
        f["ratio"] = t.ratio;
        f["eps_ratio"] = t.eps_ratio;
        r.cases.push_back(bounded("trial " + pad(t.trial, 5), true, f));
    }
    return r;
}

RunReport scan_moment(const Params& P) {
    const auto Ms = P.integers("M", 1, 4000);
    const auto ts = P.reals("t", -kLValueMaxHeight, kLValueMaxHeight);
    std::vector<std::pair<i64, double>> grid;
    for (double t : ts)
        for (i64 M : Ms) grid.push_back({M, t});
    RunReport r;
    r.cases = run_cases(grid.size(), P.jobs(), [&](std::size_t i) {
        const MomentReport m = weighted_second_moment(grid[i].first, grid[i].second);
        ojson f;
        f["M"] = m.M;
        f["t"] = m.t;
        f["count"] = m.count;
        f["sum"] = m.sum;
        f["raw_ratio"] = m.raw_ratio;
        f["ratio"] = m.ratio;
        return bounded("point " + pad(i64(i), 4), true, f);
    });
    return r;
}

const std::vector<std::string> kVerifySuites = {"charsums", "zseries-local", "zseries-global", "oscillatory",
                                                "poisson", "sieve"};
const std::vector<std::string> kScanSuites = {"kplus", "sieve", "moment"};

}  // namespace

const char* to_string(Command c) { return c == Command::Verify ? "verify" : "scan"; }

std::vector<std::string> suite_names(Command c) { return c == Command::Verify ? kVerifySuites : kScanSuites; }

KeyValues suite_defaults(Command c, const std::string& suite) {
    KeyValues d = {{"seed", "42"}, {"jobs", "1"}};
    if (c == Command::Verify) {
        if (suite == "charsums")
            d.insert({{"tol", "1e-6"}, {"parts", "t,gauss,ap"}, {"c-max", "1500"}, {"j", "4,5,6"},
                      {"rand-pairs", "200"}, {"block", "16"}, {"gauss-c-max", "4096"}, {"gauss-samples", "50"},
                      {"gauss-tol", "1e-9"}, {"mult-pairs", "500"}, {"ap-q-max", "1000"}});
        else if (suite == "zseries-local")
            d.insert({{"tol", "1e-10"}, {"p-max", "100"}, {"points", "20"}, {"margin", "0.2"}});
        else if (suite == "zseries-global")
            d.insert({{"tol", "1e-6"}, {"kl-max", "15"}, {"points", "5"}, {"q-max", "20000000"},
                      {"z2-tol", "1e-12"}, {"split-tol", "1e-13"}, {"z2-points", "5"}});
        else if (suite == "oscillatory")
            d.insert({{"tol", "1e-8"}, {"parts", "phase,magnitude,kplus,mellin"}, {"target-tol", "1e-6"},
                      {"r0-target", "0.990195"}, {"x0-target", "0.909902"}, {"ratio-target", "32"},
                      {"ratio-tol", "0.2"}, {"odd-tol", "1e-9"}, {"N", "100"}, {"u-list", "50,100,200,400"},
                      {"suppression", "1e3"}, {"T", "100"}, {"Delta", "10"}, {"kplus-ratio", "1e-3"},
                      {"mellin-X", "20,50,100"}, {"mellin-tol", "1e-6"}});
        else if (suite == "poisson")
            d.insert({{"tol", "1e-8"}, {"moduli", "16,48,80,112,2448"}, {"shapes", "3"}, {"oracle-tol", "1e-10"},
                      {"oracle-c-max", "112"}, {"demo", "0"}, {"demo-T", "100"}, {"demo-Delta", "20"},
                      {"demo-U", "0"}, {"demo-N", "50"}, {"demo-moduli", "16"}, {"demo-tol", "1e-4"}});
        else if (suite == "sieve")
            d.insert({{"tol", "10"}, {"M", "1024"}, {"N", "1024"}, {"trials", "200"},
                      {"spike-trials", "20"}, {"char-factor", "4"}, {"zeta-tol", "1e-5"}, {"lvalue-tol", "1e-6"},
                      {"lcheck-m", "1,3,5,7,11,13,15,47"}, {"lcheck-t", "0,5"}, {"moment-M", "500,1000,2000,4000"},
                      {"moment-t", "0,10,100"}, {"moment-max", "10"}});
        else
            throw ConfigError("unknown verify suite '" + suite + "'");
    } else {
        if (suite == "kplus")
            d.insert({{"T", "100"}, {"Delta", "10"}, {"x-grid", "log:1e2:1e5:31"}});
        else if (suite == "sieve")
            d.insert({{"M", "1024"}, {"N", "1024"}, {"trials", "200"}, {"mode", "random_gaussian"}});
        else if (suite == "moment")
            d.insert({{"M", "500,1000,2000,4000"}, {"t", "0,10,100"}});
        else
            throw ConfigError("unknown scan suite '" + suite + "'");
    }
    return d;
}

KeyValues parse_config_text(const std::string& text) {
    KeyValues out;
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        if (key.empty()) throw ConfigError("config line " + std::to_string(n) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

KeyValues resolve_config(const SuiteConfig& cfg) {
    KeyValues out = suite_defaults(cfg.command, cfg.suite);
    for (const KeyValues* layer : {&cfg.file, &cfg.flags})
        for (const auto& [k, v] : *layer) {
            if (!out.count(k)) throw ConfigError("suite '" + cfg.suite + "' has no option --" + k);
            out[k] = v;
        }
    return out;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    const auto parts = split(spec, ':');
    auto num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size() && std::isfinite(v)) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("grid '" + spec + "': bad number '" + s + "'");
    };
    if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
        const double a = num(parts[1]), b = num(parts[2]), nn = num(parts[3]);
        if (nn != std::floor(nn) || nn < 0 || nn > 1e6) throw ConfigError("grid '" + spec + "': bad count");
        const int n = int(nn);
        if (parts[0] == "log" && !(a > 0 && b > 0)) throw ConfigError("grid '" + spec + "': log grid needs positive ends");
        for (int i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : double(i) / (n - 1);
            out.push_back(parts[0] == "log" ? a * std::pow(b / a, f) : a + (b - a) * f);
        }
    } else if (parts.size() == 1) {
        for (const auto& w : split(spec, ','))
            if (!w.empty()) out.push_back(num(w));
    } else {
        throw ConfigError("grid '" + spec + "': expected log:a:b:n, lin:a:b:n or a comma list");
    }
    if (out.empty()) throw ConfigError("grid '" + spec + "' is empty");
    return out;
}

RunReport run_suite(const SuiteConfig& cfg) {
    const KeyValues kv = resolve_config(cfg);
    const Params P(kv);
    const auto t0 = std::chrono::steady_clock::now();
    RunReport r;
    try {
        P.seed();
        P.jobs();
        if (cfg.command == Command::Verify) {
            if (cfg.suite == "charsums") r = verify_charsums(P);
            else if (cfg.suite == "zseries-local") r = verify_zseries_local(P);
            else if (cfg.suite == "zseries-global") r = verify_zseries_global(P);
            else if (cfg.suite == "oscillatory") r = verify_oscillatory(P);
            else if (cfg.suite == "poisson") r = verify_poisson(P);
            else r = verify_sieve(P);
        } else {
            if (cfg.suite == "kplus") r = scan_kplus(P);
            else if (cfg.suite == "sieve") r = scan_sieve(P);
            else r = scan_moment(P);
        }
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    r.suite = cfg.suite;
    r.command = to_string(cfg.command);
    for (const auto& [k, v] : kv) r.config[k] = v;
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace ntcheck
