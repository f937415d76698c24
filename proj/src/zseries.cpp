#include "ntcheck/zseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

namespace ntcheck {

namespace {

constexpr double kPoleGuard = 1e-12;

// p^{-z}
cplx ppow(double p, cplx z) { return std::exp(-z * std::log(p)); }

void require_domain(Domain d, const SeriesPoint& pt, const char* what) {
    if (!domain_contains(d, pt))
        throw DomainError(std::string(what) + ": point outside " + to_string(d) + ": " + pt.describe());
}

cplx guarded_div(cplx num, cplx den, const char* what) {
    if (std::abs(den) < kPoleGuard) throw SingularityError(std::string(what) + ": denominator vanishes");
    return num / den;
}

// Sum_{r > R} (r + 1) z^r for 0 <= z < 1.
double weighted_geometric_tail(double z, int R) {
    if (z >= 1.0) return INFINITY;
    double zr = std::pow(z, R + 1);
    return zr * ((R + 2) - (R + 1) * z) / ((1 - z) * (1 - z));
}

std::vector<bool> odd_squarefree_sieve(i64 n) {
    std::vector<bool> ok(static_cast<std::size_t>(n + 1), true);
    ok[0] = false;
    for (i64 i = 0; i <= n; i += 2) ok[static_cast<std::size_t>(i)] = false;
    for (i64 p = 3; p * p <= n; p += 2)
        for (i64 k = p * p; k <= n; k += p * p) ok[static_cast<std::size_t>(k)] = false;
    return ok;
}

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    for (int p : small_primes()) {
        if (p > n) return out;
        out.push_back(p);
    }
    // Beyond the table: simple segmented trial division is enough here.
    for (i64 m = small_primes().back() + 2; m <= n; m += 2) {
        bool prime = true;
        for (int p : small_primes()) {
            if (i64(p) * p > m) break;
            if (m % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) out.push_back(m);
    }
    return out;
}

}  // namespace

SeriesPoint::SeriesPoint(cplx s, cplx u1, cplx u2, cplx u3, double U)
    : s_(s), u1_(u1), u2_(u2), u3_(u3), U_(U) {
    if (s.real() != 0.0) throw PreconditionError("SeriesPoint: Re(s) must be 0");
    if (!(U >= 0.0)) throw PreconditionError("SeriesPoint: U must be >= 0");
}

SeriesPoint SeriesPoint::from_alpha_beta(cplx alpha, cplx beta) {
    cplx u = (alpha + 1.0) / 2.0;
    return SeriesPoint(0.0, beta, u, u, 0.0);
}

std::string SeriesPoint::describe() const {
    std::ostringstream os;
    os.precision(6);
    os << "s=" << s_.imag() << "i u1=(" << u1_.real() << "," << u1_.imag() << ") u2=(" << u2_.real()
       << "," << u2_.imag() << ") u3=(" << u3_.real() << "," << u3_.imag() << ") U=" << U_;
    return os.str();
}

const char* to_string(Domain d) {
    switch (d) {
        case Domain::D0: return "D0";
        case Domain::D1: return "D1";
        case Domain::D2: return "D2";
        case Domain::Dinf: return "Dinf";
    }
    return "?";
}

bool domain_contains(Domain d, const SeriesPoint& pt, double margin) {
    const double x1 = pt.u1().real(), x2 = pt.u2().real(), x3 = pt.u3().real();
    const double m = std::min(x2, x3);
    auto gt = [margin](double lhs, double c) { return margin > 0 ? lhs >= c + margin : lhs > c; };
    switch (d) {
        case Domain::D0: return gt(x1, 1) && gt(x2, 1) && gt(x3, 1);
        case Domain::Dinf: return gt(x2, 0.5) && gt(x3, 0.5) && gt(x1 + m, 1);
        case Domain::D1: return gt(x2, 1) && gt(x3, 1) && gt(x1 + m, 1.5) && gt(x1 + 2 * m, 3);
        case Domain::D2: return gt(x2, 0.5) && gt(x3, 0.5) && gt(x1 + m, 1.5);
    }
    return false;
}

cplx local_factor_unramified(i64 p, int chi_p, const SeriesPoint& pt) {
    if (p < 3 || p % 2 == 0) throw PreconditionError("local factor: p must be an odd prime");
    if (chi_p != 1 && chi_p != -1) throw PreconditionError("unramified local factor needs chi(p) = +-1");
    const cplx a = pt.alpha(), b = pt.beta();
    if (!(b.real() > 0 && (a + b).real() > 0))
        throw DomainError("local_factor_unramified: needs Re(beta) > 0 and Re(alpha + beta) > 0");
    const double P = double(p), chi = chi_p;
    const cplx num = 1.0 + ppow(P, a + 2.0 * b) - ppow(P, 1.0 + 2.0 * a + 2.0 * b) +
                     chi * ppow(P, 1.0 + 2.0 * a + 3.0 * b);
    const cplx den = (1.0 - chi * ppow(P, b)) * (1.0 - ppow(P, 2.0 * a + 2.0 * b));
    return guarded_div(num, den, "local_factor_unramified");
}

cplx local_factor_uncancelled(i64 p, int chi_p, const SeriesPoint& pt) {
    const cplx a = pt.alpha(), b = pt.beta();
    const double P = double(p), chi = chi_p;
    const cplx num = (1.0 + chi * ppow(P, b)) * (1.0 + ppow(P, a + 2.0 * b)) -
                     ppow(P, 1.0 + 2.0 * a + 2.0 * b) * (1.0 - ppow(P, 2.0 * b));
    const cplx den = (1.0 - ppow(P, 2.0 * b)) * (1.0 - ppow(P, 2.0 * a + 2.0 * b));
    return guarded_div(num, den, "local_factor_uncancelled");
}

cplx local_factor_ramified(i64 p, const SeriesPoint& pt) {
    if (p < 3 || p % 2 == 0) throw PreconditionError("local factor: p must be an odd prime");
    const cplx ab2 = 2.0 * (pt.alpha() + pt.beta());
    if (!(ab2.real() > 0)) throw DomainError("local_factor_ramified: needs Re(2 alpha + 2 beta) > 0");
    const double P = double(p);
    return guarded_div(1.0 - ppow(P, 1.0 + ab2), 1.0 - ppow(P, ab2), "local_factor_ramified");
}

Estimate local_factor_oracle(i64 p, int chi_p, const SeriesPoint& pt, int cutoff) {
    require_domain(Domain::D0, pt, "local_factor_oracle");
    if (cutoff < 10) throw PreconditionError("local_factor_oracle: cutoff must be >= 10");
    if (chi_p < -1 || chi_p > 1) throw PreconditionError("local_factor_oracle: chi(p) in {-1, 0, 1}");
    const double P = double(p);
    const cplx x = ppow(P, pt.beta());   // p^{-beta}
    const cplx y = ppow(P, pt.alpha());  // p^{-alpha}
    const bool ramified = chi_p == 0;
    const double unit_factor = 1.0 - 1.0 / P;

    std::vector<cplx> xp(2 * cutoff + 2), yp(2 * cutoff + 1);
    xp[0] = yp[0] = 1.0;
    for (std::size_t i = 1; i < xp.size(); ++i) xp[i] = xp[i - 1] * x;
    for (std::size_t i = 1; i < yp.size(); ++i) yp[i] = yp[i - 1] * y;

    CompensatedComplexSum acc;
    // r2 = 0 block: q in {0, 1}, q >= 1 whenever r1 > 0.
    for (int r1 = 0; r1 <= cutoff; ++r1) {
        for (int q = 0; q <= 1; ++q) {
            if (r1 > 0 && q == 0) continue;
            if (ramified && q == 1) continue;  // chi(p) = 0
            const double chi_q = q ? double(chi_p) : 1.0;
            for (int g1 = 0; g1 <= 2 * r1; ++g1)
                acc.add(chi_q * xp[std::size_t(q + 2 * r1)] * yp[std::size_t(g1)]);
        }
    }
    // r2 >= 1 block forces r1 = q = 0.
    for (int r2 = 1; r2 <= cutoff; ++r2) {
        for (int g2 = ramified ? 2 * r2 : 0; g2 <= 2 * r2; ++g2) {
            const double w = g2 == 2 * r2 ? unit_factor : 1.0;
            acc.add(w * xp[std::size_t(2 * r2)] * yp[std::size_t(g2)]);
        }
    }
    const double yy = std::max(1.0, std::abs(y));
    const double z = std::pow(std::abs(x) * yy, 2.0);
    return {acc.value(), 4.0 * weighted_geometric_tail(z, cutoff) * (1.0 + std::abs(x))};
}

int KLCharacter::operator()(i64 n) const {
    int base = jacobi(n, kl);
    if (base == 0) return 0;
    const i64 r = mod(n, 8);
    switch (twist) {
        case Mod8Twist::None: return base;
        case Mod8Twist::Principal: return r % 2 ? base : 0;
        case Mod8Twist::Minus4:
            if (r % 2 == 0) return 0;
            return r % 4 == 1 ? base : -base;
        case Mod8Twist::Plus8:
            if (r % 2 == 0) return 0;
            return (r == 1 || r == 7) ? base : -base;
        case Mod8Twist::Minus8:
            if (r % 2 == 0) return 0;
            return (r == 1 || r == 3) ? base : -base;
    }
    return 0;
}

i64 KLCharacter::period() const { return twist == Mod8Twist::None ? kl : 8 * kl; }

bool KLCharacter::is_principal() const {
    if (twist != Mod8Twist::None && twist != Mod8Twist::Principal) return false;
    for (auto [p, e] : factorize(kl))
        if (e % 2) return false;
    return true;
}

DSeriesValue d_series(const SeriesPoint& pt, const KLCharacter& chi, i64 sum_cutoff, i64 prime_cutoff) {
    const cplx a = pt.alpha(), b = pt.beta();
    const double sigma = (a + 2.0 * b).real();
    if (!(sigma > 1.0 && (a + b).real() > 0.0))
        throw DomainError("d_series: needs Re(alpha + 2 beta) > 1 and Re(alpha + beta) > 0");
    if (sum_cutoff < 1 || prime_cutoff < 3) throw PreconditionError("d_series: bad cutoffs");
    const double bexp = std::max(0.0, -(1.0 + a).real());
    const double cexp = std::max(0.0, -(1.0 + a + b).real());
    if (bexp > 0 || cexp > 0)
        throw DomainError("d_series: needs Re(1 + alpha) >= 0 and Re(1 + alpha + beta) >= 0");

    DSeriesValue out;
    // Dirichlet sum over odd squarefree n, ordered factorizations n = abc.
    {
        const auto ok = odd_squarefree_sieve(sum_cutoff);
        const auto N = static_cast<std::size_t>(sum_cutoff + 1);
        std::vector<cplx> pn(N), pb(N), pc(N);
        for (std::size_t n = 1; n < N; ++n) {
            if (!ok[n]) continue;
            const double ln = std::log(double(n));
            pn[n] = std::exp(-(a + 2.0 * b) * ln);
            pb[n] = std::exp(-(1.0 + a) * ln);
            pc[n] = std::exp(-(1.0 + a + b) * ln);
        }
        CompensatedComplexSum acc;
        for (i64 n = 1; n <= sum_cutoff; ++n) {
            if (!ok[std::size_t(n)]) continue;
            const auto ds = divisors(n);
            cplx inner = 0.0;
            for (i64 bb : ds) {
                const int mu = mobius(bb);
                for (i64 cc : divisors(n / bb)) {
                    const int ch = chi(cc);
                    if (ch == 0) continue;
                    inner += double(mu * ch) * pb[std::size_t(bb)] * pc[std::size_t(cc)];
                }
            }
            acc.add(pn[std::size_t(n)] * inner);
        }
        // Rankin: sum_{n > X} |f(n)| <= X^{-theta} prod_p (1 + 3 p^{theta - sigma}).
        const double theta = (sigma - 1.0) / 2.0;
        double log_prod = 0.0;
        const i64 P = 100000;
        for (i64 p : primes_up_to(P))
            if (p > 2) log_prod += std::log1p(3.0 * std::pow(double(p), theta - sigma));
        const double e = sigma - theta;  // > 1
        log_prod += 3.0 * std::pow(double(P), 1.0 - e) / (e - 1.0);
        out.sum_form = {acc.value(), std::exp(log_prod - theta * std::log(double(sum_cutoff)))};
    }
    // Euler product over odd primes.
    {
        cplx prod = 1.0;
        for (i64 p : primes_up_to(prime_cutoff)) {
            if (p == 2) continue;
            const double P = double(p);
            prod *= 1.0 + ppow(P, a + 2.0 * b) *
                              (1.0 - ppow(P, 1.0 + a) + double(chi(p)) * ppow(P, 1.0 + a + b));
        }
        const double tail = 3.0 * std::pow(double(prime_cutoff), 1.0 - sigma) / (sigma - 1.0);
        out.product_form = {prod, std::abs(prod) * std::expm1(tail)};
    }
    return out;
}

cplx a_p(i64 p, const SeriesPoint& pt) {
    if (p < 3 || p % 2 == 0) throw PreconditionError("a_p: p must be an odd prime");
    const cplx a = pt.alpha(), b = pt.beta();
    const double P = double(p);
    const cplx t = ppow(P, 1.0 + 2.0 * a + 2.0 * b);
    return guarded_div(1.0 - t, 1.0 + ppow(P, a + 2.0 * b) - t, "a_p");
}

const char* to_string(Z2Case c) {
    switch (c) {
        case Z2Case::I: return "i";
        case Z2Case::II: return "ii";
        case Z2Case::III: return "iii";
        case Z2Case::IV: return "iv";
    }
    return "?";
}

namespace {
void check_z2_query(const Z2Query& q) {
    if (q.delta != 0 && q.delta != 1) throw PreconditionError("Z2: delta must be 0 or 1");
    if (q.L && *q.L < 3) throw PreconditionError("Z2: L must be >= 3");
}

// Whether (nu, gamma, lambda) lies in the case and the requested part.
bool z2_selected(const Z2Query& q, int nu, int gamma, int lambda) {
    if (std::min(lambda, nu) != std::min(lambda, gamma)) return false;
    const int d = lambda - nu;
    bool in_case = false;
    switch (q.case_label) {
        case Z2Case::I: in_case = d <= 0; break;
        case Z2Case::II: in_case = d == 1; break;
        case Z2Case::III: in_case = d == 2; break;
        case Z2Case::IV: in_case = d >= 3; break;
    }
    if (!in_case) return false;
    if (q.part == Z2Part::Full || !q.L) return q.part != Z2Part::Tail;
    return q.part == Z2Part::Head ? d <= *q.L : d > *q.L;
}
}  // namespace

cplx z2_closed(const Z2Query& q, const SeriesPoint& pt) {
    check_z2_query(q);
    const cplx a = pt.alpha(), b = pt.beta(), A = a + b;
    const cplx a2 = pt.nu_exponent(), a3 = pt.gamma_exponent();
    auto two = [](cplx z) { return ppow(2.0, z); };  // 2^{-z}
    if (!(A.real() > 0)) throw DomainError("z2_closed: needs Re(alpha + beta) > 0");
    const cplx geoA = 1.0 - two(A);
    const double d = q.delta;

    const bool tail_only = q.part == Z2Part::Tail;
    if (q.case_label != Z2Case::IV) {
        if (tail_only) return 0.0;
        switch (q.case_label) {
            case Z2Case::I:
                if (!(a2.real() > 0 && a3.real() > 0))
                    throw DomainError("z2_closed case (i): needs Re(u2) > 0 and Re(u3) > 0");
                return guarded_div(two(2.0 + d + 4.0 * A), (1.0 - two(a2)) * (1.0 - two(a3)) * geoA,
                                   "z2_closed");
            case Z2Case::II: return guarded_div(two(1.0 + d + 3.0 * a + 4.0 * b), geoA, "z2_closed");
            case Z2Case::III: return guarded_div(two(d + 2.0 * a + 4.0 * b), geoA, "z2_closed");
            default: break;
        }
    }
    const cplx base = guarded_div(two(2.0 * A), geoA, "z2_closed");
    const bool infinite_L = !q.L.has_value();
    if (q.part == Z2Part::Head && !infinite_L) {
        cplx s = 0.0;
        for (int mu = 3; mu <= *q.L; ++mu) s += two(double(mu) * b);
        return base * s;
    }
    if (tail_only && infinite_L) return 0.0;
    if (!(b.real() > 0)) throw DomainError("z2_closed case (iv): needs Re(beta) > 0");
    const int start = tail_only ? *q.L + 1 : 3;
    return base * guarded_div(two(double(start) * b), 1.0 - two(b), "z2_closed");
}

Estimate z2_oracle(const Z2Query& q, const SeriesPoint& pt, int grid_cutoff) {
    check_z2_query(q);
    require_domain(Domain::D0, pt, "z2_oracle");
    const int G = grid_cutoff;
    if (G < 8) throw PreconditionError("z2_oracle: grid_cutoff must be >= 8");
    const cplx b = pt.beta(), a2 = pt.nu_exponent(), a3 = pt.gamma_exponent();
    std::vector<cplx> pl(std::size_t(G + 1)), pn(std::size_t(G + 1)), pg(std::size_t(G + 1));
    for (int i = 0; i <= G; ++i) {
        pl[std::size_t(i)] = ppow(2.0, double(i) * b);
        pn[std::size_t(i)] = ppow(2.0, double(i) * a2);
        pg[std::size_t(i)] = ppow(2.0, double(i) * a3);
    }
    CompensatedComplexSum acc;
    for (int lambda = 4; lambda <= G; ++lambda)
        for (int nu = 2; nu <= G; ++nu)
            for (int gamma = 2; gamma <= G; ++gamma) {
                if (!z2_selected(q, nu, gamma, lambda)) continue;
                const double g = std::ldexp(1.0, std::min(nu, lambda - 2 - q.delta));
                acc.add(g * pl[std::size_t(lambda)] * pn[std::size_t(nu)] * pg[std::size_t(gamma)]);
            }
    // Terms with an index beyond G, bounding the gcd factor by 2^nu.
    const double xl = std::pow(2.0, -b.real()), xn = std::pow(2.0, 1.0 - a2.real()),
                 xg = std::pow(2.0, -a3.real());
    auto geo = [](double x, int from) { return std::pow(x, from) / (1.0 - x); };
    const double tail = geo(xl, G + 1) * geo(xn, 2) * geo(xg, 2) + geo(xl, 4) * geo(xn, G + 1) * geo(xg, 2) +
                        geo(xl, 4) * geo(xn, 2) * geo(xg, G + 1);
    return {acc.value(), tail};
}

Estimate z_kl_product(i64 k, i64 l, const SeriesPoint& pt, Mod8Twist twist, i64 prime_cutoff) {
    if (k < 1 || l < 1 || k % 2 == 0 || l % 2 == 0) throw PreconditionError("z_kl_product: k, l odd positive");
    require_domain(Domain::Dinf, pt, "z_kl_product");
    const KLCharacter chi{k * l, twist};
    const cplx a = pt.alpha(), b = pt.beta();
    if (chi.is_principal() && std::abs(b - 1.0) < 1e-6)
        throw SingularityError("z_kl_product: pole at beta = 1 for principal character");

    const Estimate L = dirichlet_l(b, [&chi](i64 n) { return chi(n); }, chi.period());
    const Estimate Z = riemann_zeta(2.0 * (a + b));
    const DSeriesValue D = d_series(pt, chi, 1, prime_cutoff);
    cplx ramified = 1.0;
    for (auto [p, e] : factorize(k * l)) ramified *= a_p(p, pt);
    const cplx two_factors = (1.0 - ppow(2.0, 2.0 * (a + b))) * (1.0 - double(chi(2)) * ppow(2.0, b));
    const cplx value = L.value * Z.value * D.product_form.value * ramified * two_factors;
    const double rel = L.error / std::max(std::abs(L.value), 1e-300) +
                       Z.error / std::max(std::abs(Z.value), 1e-300) +
                       D.product_form.error / std::max(std::abs(D.product_form.value), 1e-300);
    return {value, std::abs(value) * rel};
}

Estimate z_kl_oracle(i64 k, i64 l, const SeriesPoint& pt, Mod8Twist twist, ZOracleCutoff cutoff) {
    return z_kl_oracle_batch({{k, l}}, pt, twist, cutoff).front();
}

namespace {

struct Block {
    i64 r1, r2, rad1;
    i64 q_max;
    std::vector<cplx> weight;  // per (k, l) pair: (r1 r2)^{-2 beta} G1 G2
    std::vector<double> weight_abs;
};

// sum_{n > R} tau(n)^3 n^{-2 sigma}: explicit up to 64R, then tau(n) <= 2 sqrt(n).
double block_tail_bound(i64 R, double sigma) {
    const i64 top = 64 * R;
    std::vector<int> tau(std::size_t(top + 1), 0);
    for (i64 d = 1; d <= top; ++d)
        for (i64 m = d; m <= top; m += d) ++tau[std::size_t(m)];
    double s = 0.0;
    for (i64 n = R + 1; n <= top; ++n) {
        const double t = tau[std::size_t(n)];
        s += t * t * t * std::pow(double(n), -2.0 * sigma);
    }
    const double e = 2.0 * sigma - 1.5;
    s += 8.0 * std::pow(double(top), 1.0 - e) / (e - 1.0);
    return s;
}

}  // namespace

std::vector<Estimate> z_kl_oracle_batch(const std::vector<std::pair<i64, i64>>& kl_pairs, const SeriesPoint& pt,
                                        Mod8Twist twist, ZOracleCutoff cutoff) {
    require_domain(Domain::D0, pt, "z_kl_oracle");
    const i64 Q = cutoff.q_max;
    if (Q < 100) throw PreconditionError("z_kl_oracle: q_max must be >= 100");
    const cplx alpha = pt.alpha(), beta = pt.beta();
    const double sigma = beta.real();
    const std::size_t K = kl_pairs.size();
    std::vector<KLCharacter> chis;
    for (auto [k, l] : kl_pairs) {
        if (k < 1 || l < 1 || k % 2 == 0 || l % 2 == 0)
            throw PreconditionError("z_kl_oracle: k, l odd positive");
        chis.push_back({k * l, twist});
    }

    // Blocks (r1, r2): odd, coprime, r1 r2 <= R.
    const i64 R = static_cast<i64>(std::sqrt(double(Q)));
    std::vector<Block> blocks;
    for (i64 r1 = 1; r1 <= R; r1 += 2)
        for (i64 r2 = 1; r1 * r2 <= R; r2 += 2) {
            if (gcd(r1, r2) != 1) continue;
            Block blk{r1, r2, radical(r1), Q / (r1 * r2 * r1 * r2), {}, {}};
            const cplx rpow = std::exp(-2.0 * beta * std::log(double(r1 * r2)));
            cplx g1 = 0.0;
            double g1_abs = 0.0;
            for (i64 g : divisors(r1 * r1)) {
                const cplx t = std::exp(-alpha * std::log(double(g)));
                g1 += t;
                g1_abs += std::abs(t);
            }
            const auto r2_divs = divisors(r2 * r2);
            const auto r2_primes = factorize(r2);
            for (std::size_t i = 0; i < K; ++i) {
                cplx g2 = 0.0;
                double g2_abs = 0.0;
                for (i64 g : r2_divs) {
                    const i64 co = r2 * r2 / g;
                    if (gcd(co, chis[i].kl) != 1) continue;
                    double w = 1.0;
                    for (auto [p, e] : r2_primes)
                        if (co % p != 0) w *= 1.0 - 1.0 / double(p);
                    const cplx t = w * std::exp(-alpha * std::log(double(g)));
                    g2 += t;
                    g2_abs += std::abs(t);
                }
                blk.weight.push_back(rpow * g1 * g2);
                blk.weight_abs.push_back(std::abs(rpow) * g1_abs * g2_abs);
            }
            blocks.push_back(std::move(blk));
        }
    std::sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) { return x.q_max > y.q_max; });

    // One pass over odd squarefree q; blocks are active while q <= q_max.
    const auto sqfree = odd_squarefree_sieve(Q);
    std::vector<std::vector<int>> chi_table(K);
    for (std::size_t i = 0; i < K; ++i) {
        const i64 per = chis[i].period();
        chi_table[i].resize(std::size_t(per));
        for (i64 r = 0; r < per; ++r) chi_table[i][std::size_t(r)] = chis[i](r);
    }
    std::vector<CompensatedComplexSum> qsum(blocks.size() * K);
    std::size_t active = blocks.size();
    for (i64 q = 1; q <= Q; q += 2) {
        if (!sqfree[std::size_t(q)]) continue;
        while (active > 0 && blocks[active - 1].q_max < q) --active;
        if (active == 0) break;
        const cplx qb = std::exp(-beta * std::log(double(q)));
        for (std::size_t j = 0; j < active; ++j) {
            const Block& blk = blocks[j];
            if (q % blk.rad1 != 0 || gcd(q, blk.r2) != 1) continue;
            for (std::size_t i = 0; i < K; ++i) {
                const int c = chi_table[i][std::size_t(q % i64(chi_table[i].size()))];
                if (c) qsum[j * K + i].add(double(c) * qb);
            }
        }
    }

    const double tail_blocks = block_tail_bound(R, sigma) * 2.0 * (1.0 + 1.0 / (sigma - 1.0));
    std::vector<Estimate> out(K);
    for (std::size_t i = 0; i < K; ++i) {
        CompensatedComplexSum total;
        double tail = tail_blocks;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            total.add(blocks[j].weight[i] * qsum[j * K + i].value());
            const double qp = double(blocks[j].q_max) + 1.0;
            tail += blocks[j].weight_abs[i] * (std::pow(qp, -sigma) + std::pow(qp, 1.0 - sigma) / (sigma - 1.0));
        }
        out[i] = {total.value(), tail};
    }
    return out;
}

}  // namespace ntcheck
