#include "ntcheck/sieve.hpp"

#include <algorithm>
#include <cmath>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"
#include "ntcheck/special.hpp"

namespace ntcheck {

namespace {

std::vector<std::int32_t> smallest_prime_factors(i64 n) {
    std::vector<std::int32_t> spf(std::size_t(n + 1), 0);
    for (i64 i = 2; i <= n; ++i) {
        if (spf[std::size_t(i)] != 0) continue;
        for (i64 k = i; k <= n; k += i)
            if (spf[std::size_t(k)] == 0) spf[std::size_t(k)] = std::int32_t(i);
    }
    return spf;
}

std::vector<std::int8_t> jacobi_row(i64 m, i64 N, const std::vector<std::int32_t>& spf) {
    std::vector<std::int8_t> row(std::size_t(N + 1), 0);
    row[0] = std::int8_t(jacobi(0, m));
    if (N >= 1) row[1] = 1;
    for (i64 n = 2; n <= N; ++n) {
        const i64 p = spf[std::size_t(n)];
        row[std::size_t(n)] = p == n ? std::int8_t(jacobi(p, m)) : std::int8_t(row[std::size_t(p)] * row[std::size_t(n / p)]);
    }
    return row;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * double(v.size() - 1);
    const auto i = std::size_t(pos);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (pos - double(i)) * (v[i + 1] - v[i]);
}

constexpr double kEpsExponent = 0.1;

}  // namespace

std::vector<i64> odd_squarefree_up_to(i64 n) {
    std::vector<char> bad(std::size_t(std::max<i64>(n, 0) + 1), 0);
    for (i64 p = 3; p * p <= n; p += 2)
        for (i64 k = p * p; k <= n; k += p * p) bad[std::size_t(k)] = 1;
    std::vector<i64> out;
    for (i64 k = 1; k <= n; k += 2)
        if (!bad[std::size_t(k)]) out.push_back(k);
    return out;
}

JacobiTable::JacobiTable(i64 M, i64 N) : M_(M), N_(N) {
    if (M < 1 || N < 1 || M > kSieveMaxSize || N > kSieveMaxSize)
        throw PreconditionError("JacobiTable: need 1 <= M, N <= 2^16");
    spf_ = smallest_prime_factors(N);
}

std::vector<std::int8_t> JacobiTable::row(i64 m) const {
    if (m < 1 || m > M_ || m % 2 == 0) throw PreconditionError("JacobiTable: m must be odd and <= M");
    return jacobi_row(m, N_, spf_);
}

int JacobiTable::operator()(i64 n, i64 m) const {
    if (n < 0 || n > N_) throw PreconditionError("JacobiTable: n out of range");
    return row(m)[std::size_t(n)];
}

const char* to_string(CoefficientMode m) {
    switch (m) {
        case CoefficientMode::RandomUnit: return "random_unit";
        case CoefficientMode::RandomGaussian: return "random_gaussian";
        case CoefficientMode::SingleSpike: return "single_spike";
        case CoefficientMode::CharacterSpike: return "character_spike";
    }
    return "?";
}

CoefficientMode coefficient_mode_from_string(const std::string& s) {
    for (auto m : {CoefficientMode::RandomUnit, CoefficientMode::RandomGaussian, CoefficientMode::SingleSpike,
                   CoefficientMode::CharacterSpike})
        if (s == to_string(m)) return m;
    throw ConfigError("unknown coefficient mode '" + s + "'");
}

void SieveScanConfig::validate() const {
    if (M < 1 || N < 1 || M > kSieveMaxSize || N > kSieveMaxSize)
        throw PreconditionError("sieve: need 1 <= M, N <= 2^16");
    if (trials < 1 || trials > 100000) throw PreconditionError("sieve: trials out of range");
}

SieveReport large_sieve_ratio(const SieveScanConfig& cfg) {
    cfg.validate();
    const JacobiTable table(cfg.M, cfg.N);
    const std::vector<i64> ms = odd_squarefree_up_to(cfg.M), ns = odd_squarefree_up_to(cfg.N);
    const std::size_t nt = std::size_t(cfg.trials), nn = ns.size();

    SieveReport rep;
    rep.config = cfg;
    rep.trials.resize(nt);
    std::vector<cplx> a(nt * nn);
    for (std::size_t k = 0; k < nt; ++k) {
        Rng rng(cfg.seed, k);
        SieveTrial& tr = rep.trials[k];
        tr.trial = int(k);
        cplx* ak = &a[k * nn];
        switch (cfg.mode) {
            case CoefficientMode::RandomUnit:
                for (std::size_t i = 0; i < nn; ++i) ak[i] = e_of(rng.uniform());
                break;
            case CoefficientMode::RandomGaussian:
                for (std::size_t i = 0; i < nn; ++i) {
                    const double re = rng.normal(), im = rng.normal();
                    ak[i] = cplx(re, im) * std::sqrt(0.5);
                }
                break;
            case CoefficientMode::SingleSpike: {
                const auto i = std::size_t(rng.integer(0, i64(nn) - 1));
                ak[i] = 1.0;
                tr.spike = ns[i];
                break;
            }
            case CoefficientMode::CharacterSpike: {
                tr.spike = ms[std::size_t(rng.integer(0, i64(ms.size()) - 1))];
                const auto row = table.row(tr.spike);
                for (std::size_t i = 0; i < nn; ++i) ak[i] = double(row[std::size_t(ns[i])]);
                break;
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < nn; ++i) norm += std::norm(ak[i]);
        tr.normalizer = double(cfg.M + cfg.N) * norm;
    }

    // Moduli in fixed chunks, partial sums combined in chunk order, so the
    // result does not depend on the number of workers.
    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (ms.size() + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks * nt, 0.0);
    parallel_for(chunks, cfg.jobs, [&](std::size_t ch) {
        std::vector<double> chi(nn);
        for (std::size_t mi = ch * kChunk; mi < std::min(ms.size(), (ch + 1) * kChunk); ++mi) {
            const auto row = table.row(ms[mi]);
            for (std::size_t i = 0; i < nn; ++i) chi[i] = row[std::size_t(ns[i])];
            for (std::size_t k = 0; k < nt; ++k) {
                const cplx* ak = &a[k * nn];
                double re = 0.0, im = 0.0;
                for (std::size_t i = 0; i < nn; ++i) {
                    re += chi[i] * ak[i].real();
                    im += chi[i] * ak[i].imag();
                }
                partial[ch * nt + k] += re * re + im * im;
            }
        }
    });

    const double eps_norm = std::pow(double(cfg.M) * double(cfg.N), kEpsExponent);
    std::vector<double> ratios;
    for (std::size_t k = 0; k < nt; ++k) {
        SieveTrial& tr = rep.trials[k];
        for (std::size_t ch = 0; ch < chunks; ++ch) tr.lhs += partial[ch * nt + k];
        tr.ratio = tr.normalizer > 0 ? tr.lhs / tr.normalizer : 0.0;
        tr.eps_ratio = tr.ratio / eps_norm;
        ratios.push_back(tr.ratio);
        rep.max_ratio = std::max(rep.max_ratio, tr.ratio);
        rep.max_eps_ratio = std::max(rep.max_eps_ratio, tr.eps_ratio);
    }
    rep.median_ratio = quantile(ratios, 0.5);
    rep.q90_ratio = quantile(ratios, 0.9);
    return rep;
}

// ---- Approximate functional equation ----
//
// With Lambda(s) = (q/pi)^{s/2} Gamma((s + kappa)/2) L(s, chi) = Lambda(1 - s)
// and G(w) = exp(w^2 / 16),
//   L(s) = sum chi(n) n^{-s} V_s(n / sqrt q)
//        + [gamma(1 - s) / gamma(s)] sum chi(n) n^{s - 1} V_{1-s}(n / sqrt q) - R,
//   V_s(y) = (1 / 2 pi i) int_(1/2) pi^{-w/2} Gamma((s + w + kappa)/2) / Gamma((s + kappa)/2)
//            y^{-w} G(w) dw / w,
// where R = (G(1 - s)/(1 - s) + G(s)/s) / gamma(s) collects the poles of
// Lambda at 0 and 1 and is present only for q = 1.

namespace {

constexpr double kLineRe = 0.5;
constexpr double kLineHalfWidth = 50.0;
constexpr double kLineStep = 0.05;
constexpr double kTableStep = 1.0 / 1024.0;
constexpr double kTableLow = -6.0;

cplx afe_g(cplx w) { return std::exp(w * w / 16.0); }

}  // namespace

class QuadraticLFamily::Weight {
public:
    Weight(double t, int kappa) {
        const cplx s(0.5, t);
        const cplx lg0 = log_gamma(0.5 * (s + double(kappa)));
        const int J = int(std::lround(2.0 * kLineHalfWidth / kLineStep));
        coef_.resize(std::size_t(J + 1));
        for (int j = 0; j <= J; ++j) {
            const cplx w(kLineRe, -kLineHalfWidth + j * kLineStep);
            const double end = (j == 0 || j == J) ? 0.5 : 1.0;
            coef_[std::size_t(j)] = end * kLineStep / kTwoPi * afe_g(w) *
                                    std::exp(log_gamma(0.5 * (s + w + double(kappa))) - lg0 - 0.5 * w * std::log(kPi)) /
                                    w;
        }
        // Table in log y until |V| stays below 1e-20.
        const double hi = std::log(std::max(1.0, std::sqrt((1.0 + std::abs(t)) / kTwoPi))) + 4.0;
        for (double L = kTableLow; L <= hi; L += kTableStep) table_.push_back(direct(L));
        std::size_t last = table_.size();
        while (last > 4 && std::abs(table_[last - 1]) < 1e-20) --last;
        table_.resize(std::min(table_.size(), last + 4));
        cutoff_ = std::exp(kTableLow + kTableStep * double(table_.size() - 3));
    }

    // V(e^L) by Horner in e^{-i h L}.
    cplx direct(double L) const {
        const cplx r = std::polar(1.0, -kLineStep * L);
        cplx acc = 0.0;
        for (std::size_t j = coef_.size(); j-- > 0;) acc = acc * r + coef_[j];
        return acc * std::exp(cplx(-kLineRe * L, kLineHalfWidth * L));
    }

    double cutoff() const { return cutoff_; }

    cplx operator()(double y) const {
        if (y >= cutoff_) return 0.0;
        const double L = std::log(y);
        const double x = (L - kTableLow) / kTableStep;
        const auto i = i64(std::floor(x));
        if (i < 1) return direct(L);
        const double f = x - double(i);
        const cplx* p = &table_[std::size_t(i - 1)];
        // Four-point Lagrange on nodes -1, 0, 1, 2.
        return p[0] * (-f * (f - 1.0) * (f - 2.0) / 6.0) + p[1] * ((f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0) +
               p[2] * (-(f + 1.0) * f * (f - 2.0) / 2.0) + p[3] * ((f + 1.0) * f * (f - 1.0) / 6.0);
    }

private:
    std::vector<cplx> coef_;
    std::vector<cplx> table_;
    double cutoff_ = 0.0;
};

QuadraticLFamily::QuadraticLFamily(double t, i64 m_max) : t_(t), m_max_(m_max) {
    if (m_max < 1 || m_max > kLValueMaxConductor) throw PreconditionError("quadratic L: conductor out of range");
    if (!(std::abs(t) <= kLValueMaxHeight)) throw PreconditionError("quadratic L: |t| must be <= 1000");
    double cut = 0.0;
    for (int kappa = 0; kappa < 2; ++kappa)
        for (double sg : {1.0, -1.0}) {
            w_.push_back(std::make_shared<const Weight>(sg * t, kappa));
            cut = std::max(cut, w_.back()->cutoff());
        }
    n_max_ = i64(std::ceil(cut * std::sqrt(double(m_max)))) + 1;
    n_pow_.resize(std::size_t(n_max_ + 1));
    for (i64 n = 1; n <= n_max_; ++n) n_pow_[std::size_t(n)] = std::exp(-cplx(0.5, t) * std::log(double(n)));
    spf_ = smallest_prime_factors(n_max_);
}

i64 QuadraticLFamily::length(i64 m) const {
    const int kappa = m % 4 == 1 ? 0 : 1;
    const double cut = std::max(w_[std::size_t(2 * kappa)]->cutoff(), w_[std::size_t(2 * kappa + 1)]->cutoff());
    return std::min(n_max_, i64(std::ceil(cut * std::sqrt(double(m)))));
}

cplx QuadraticLFamily::operator()(i64 m) const {
    if (m < 1 || m > m_max_ || m % 2 == 0 || !is_squarefree(m))
        throw PreconditionError("quadratic L: m must be odd squarefree and within the family");
    const int kappa = m % 4 == 1 ? 0 : 1;
    const Weight& v1 = *w_[std::size_t(2 * kappa)];
    const Weight& v2 = *w_[std::size_t(2 * kappa + 1)];
    const i64 len = length(m);
    const auto chi = jacobi_row(m, len, spf_);
    const double rq = std::sqrt(double(m));
    CompensatedComplexSum s1, s2;
    for (i64 n = 1; n <= len; ++n) {
        const int c = chi[std::size_t(n)];
        if (c == 0) continue;
        const double y = double(n) / rq;
        const cplx np = n_pow_[std::size_t(n)];
        s1.add(double(c) * np * v1(y));
        s2.add(double(c) * std::conj(np) * v2(y));
    }
    const cplx s(0.5, t_);
    const double k = double(kappa);
    const cplx root = std::exp(cplx(0.0, -t_) * std::log(double(m) / kPi) + log_gamma(0.5 * (1.0 - s + k)) -
                               log_gamma(0.5 * (s + k)));
    cplx out = s1.value() + root * s2.value();
    if (m == 1) {
        const cplx gamma_s = std::exp(-0.5 * s * std::log(kPi) + log_gamma(0.5 * s));
        out -= (afe_g(1.0 - s) / (1.0 - s) + afe_g(s) / s) / gamma_s;
    }
    return out;
}

cplx quadratic_L_value(i64 m, double t) {
    if (m < 1 || m > kLValueMaxConductor) throw PreconditionError("quadratic L: conductor out of range");
    return QuadraticLFamily(t, m)(m);
}

MomentReport weighted_second_moment(i64 M, double t) {
    if (M < 1 || M > 4000) throw PreconditionError("weighted_second_moment: need 1 <= M <= 4000");
    const QuadraticLFamily fam(t, M);
    MomentReport rep;
    rep.M = M;
    rep.t = t;
    CompensatedSum acc;
    for (i64 m : odd_squarefree_up_to(M)) {
        acc.add(std::norm(fam(m)) / std::sqrt(double(m)));
        ++rep.count;
    }
    rep.sum = acc.value();
    const double h = 1.0 + std::abs(t);
    rep.raw_ratio = rep.sum / (std::sqrt(double(M)) + std::sqrt(h));
    rep.ratio = rep.raw_ratio / std::pow(double(M) * h, kEpsExponent);
    return rep;
}

}  // namespace ntcheck
