#include "ntcheck/charsums.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

namespace ntcheck {

namespace {

// The oracles are called many times per modulus during scans.
const UnitRoots& roots_for(i64 c) {
    thread_local std::unique_ptr<UnitRoots> cached;
    if (!cached || cached->modulus() != c) cached = std::make_unique<UnitRoots>(c);
    return *cached;
}

// e(n/8) without going through a table.
cplx e8(i64 n) {
    static const double h = std::sqrt(0.5);
    static const cplx v[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
    return v[mod(n, 8)];
}

cplx e4(i64 n) { return e8(2 * mod(n, 4)); }

// sum_{x mod c} e_c(t x^2 + a x), all residues kept in [0, c).
cplx quadratic_exp_sum(i64 t, i64 a, i64 c, const UnitRoots& roots) {
    t = mod(t, c);
    a = mod(a, c);
    CompensatedComplexSum acc;
    i64 phase = 0;               // t x^2 + a x
    i64 step = mod(t + a, c);    // t(2x+1) + a
    const i64 twice_t = mod(2 * t, c);
    for (i64 x = 0; x < c; ++x) {
        acc.add(roots.at(phase));
        phase += step;
        if (phase >= c) phase -= c;
        step += twice_t;
        if (step >= c) step -= c;
    }
    return acc.value();
}

}  // namespace

SumValue gauss_sum_oracle(i64 a, i64 c) {
    if (c < 1) throw PreconditionError("gauss_sum_oracle: c must be positive");
    return SumValue::of(quadratic_exp_sum(a, 0, c, roots_for(c)));
}

SumValue gauss_sum_closed(i64 a, i64 c) {
    if (c < 1) throw PreconditionError("gauss_sum_closed: c must be positive");
    if (gcd(a, c) != 1) throw PreconditionError("gauss_sum_closed: gcd(a, c) must be 1");
    const FactoredModulus fm = factor_modulus(c);
    const double root_c = std::sqrt(static_cast<double>(c));
    if (fm.j == 0) return SumValue::of(static_cast<double>(jacobi(a, c)) * epsilon(c) * root_c);
    if (fm.j == 1)
        throw UnsupportedModulusError("gauss_sum_closed: no closed form for 2 || c (c = " +
                                      std::to_string(c) + ")");
    const i64 co = fm.c_odd;
    const int chi = jacobi(fm.delta ? mulmod(a, 2, co) : a, co);
    const i64 ac = mulmod(a, co, 8);
    cplx tail = fm.delta == 0 ? cplx(1.0) + e4(ac) : std::sqrt(2.0) * e8(ac);
    return SumValue::of(epsilon(co) * root_c * static_cast<double>(chi) * tail);
}

SumValue kloosterman(i64 m, i64 n, i64 c) {
    if (c < 1) throw PreconditionError("kloosterman: c must be positive");
    if (c == 1) return SumValue::of(1.0);
    const UnitRoots& roots = roots_for(c);
    m = mod(m, c);
    n = mod(n, c);
    CompensatedComplexSum acc;
    for (i64 x = 1; x < c; ++x) {
        if (gcd(x, c) != 1) continue;
        i64 xbar = mod_inverse(x, c);
        acc.add(roots.at((mulmod(m, x, c) + mulmod(n, xbar, c)) % c));
    }
    return SumValue::of(acc.value());
}

int RealCharacter::primitive(i64 n) const { return jacobi(n, q_star); }

int RealCharacter::operator()(i64 n) const {
    if (gcd(n, q0) != 1) return 0;
    return jacobi(n, q_star);
}

void RealCharacter::validate() const {
    if (q < 1 || q_star < 1 || q0 < 1) throw PreconditionError("RealCharacter: moduli must be positive");
    if (q_star % 2 == 0 || !is_squarefree(q_star))
        throw PreconditionError("RealCharacter: q* must be odd and squarefree");
    if (gcd(q_star, q0) != 1) throw PreconditionError("RealCharacter: gcd(q*, q0) must be 1");
    if (q % q_star != 0 || q % q0 != 0) throw PreconditionError("RealCharacter: q* and q0 must divide q");
    for (auto [p, e] : factorize(q))
        if (q_star % p != 0 && q0 % p != 0)
            throw PreconditionError("RealCharacter: prime " + std::to_string(p) +
                                    " of q divides neither q* nor q0");
}

namespace {
void check_ap_args(const RealCharacter& chi, i64 a, i64 d) {
    chi.validate();
    if (d < 1 || chi.q % d != 0) throw PreconditionError("char_sum_ap: d must divide q");
    if (gcd(a, d) != 1) throw PreconditionError("char_sum_ap: gcd(a, d) must be 1");
}
}  // namespace

i64 char_sum_ap_exact(const RealCharacter& chi, i64 a, i64 d) {
    check_ap_args(chi, a, d);
    if (d % chi.q_star != 0) return 0;
    i64 value = chi.q / d;
    for (auto [p, e] : factorize(chi.q0))
        if (d % p != 0) value = value / p * (p - 1);
    return value * chi.primitive(a);
}

SumValue char_sum_ap(const RealCharacter& chi, i64 a, i64 d) {
    i64 v = char_sum_ap_exact(chi, a, d);
    if (v == 0) return SumValue::zero();
    return SumValue::of(static_cast<double>(v));
}

i64 char_sum_ap_direct(const RealCharacter& chi, i64 a, i64 d) {
    check_ap_args(chi, a, d);
    i64 total = 0;
    for (i64 n = mod(a, d); n < chi.q; n += d) total += chi(n);
    return total;
}

SumValue t_sum_oracle(i64 a, i64 b, i64 c) {
    if (c < 1 || c > kTOracleMaxModulus)
        throw PreconditionError("t_sum_oracle: c out of range (max " +
                                std::to_string(kTOracleMaxModulus) + ")");
    a = mod(a, c);
    b = mod(b, c);
    const i64 g = gcd(b, c);
    if (a % g != 0) return SumValue::zero();
    const i64 cg = c / g;
    const i64 t0 = cg == 1 ? 0 : mulmod(a / g, mod_inverse(b / g, cg), cg);
    const UnitRoots& roots = roots_for(c);
    CompensatedComplexSum acc;
    bool any = false;
    for (i64 k = 0; k < g; ++k) {
        const i64 t = t0 + k * cg;
        if (gcd(t, c) != 1) continue;
        any = true;
        acc.add(quadratic_exp_sum(t, a, c, roots));
    }
    if (!any) return SumValue::zero();
    return SumValue::of(static_cast<double>(c) * acc.value());
}

SumValue t_sum_naive(i64 a, i64 b, i64 c) {
    if (c < 1 || c > kTNaiveMaxModulus)
        throw PreconditionError("t_sum_naive: c out of range (max " +
                                std::to_string(kTNaiveMaxModulus) + ")");
    const UnitRoots& roots = roots_for(c);
    const auto cu = static_cast<std::size_t>(c);
    std::vector<i64> inverse(cu, -1);
    for (i64 x = 1; x <= c; ++x)
        if (gcd(x, c) == 1) inverse[static_cast<std::size_t>(x % c)] = mod_inverse(x, c);
    // Kloosterman values S(m, n; c) for square residues m, n, filled lazily.
    std::vector<cplx> kl(cu * cu);
    std::vector<char> have(cu * cu, 0);
    auto S = [&](i64 m, i64 n) -> cplx {
        const std::size_t idx = static_cast<std::size_t>(m) * cu + static_cast<std::size_t>(n);
        if (!have[idx]) {
            CompensatedComplexSum s;
            for (i64 x = 0; x < c; ++x) {
                const i64 xb = inverse[static_cast<std::size_t>(x)];
                if (xb < 0) continue;
                s.add(roots.at((m * x + n * xb) % c));
            }
            kl[idx] = s.value();
            have[idx] = 1;
        }
        return kl[idx];
    };
    a = mod(a, c);
    b = mod(b, c);
    CompensatedComplexSum acc;
    for (i64 x = 0; x < c; ++x)
        for (i64 y = 0; y < c; ++y)
            acc.add(S(x * x % c, y * y % c) * roots.at((2 * x * y + a * x + b * y) % c));
    return SumValue::of(acc.value());
}

SumValue t_sum_closed(i64 a, i64 b, i64 c) { return t_sum_closed(a, b, factor_modulus(c)); }

SumValue t_sum_closed(i64 a, i64 b, const FactoredModulus& fm) {
    const i64 c = fm.c;
    if (fm.j < 4) throw PreconditionError("t_sum_closed: requires 16 | c");
    a = mod(a, c);
    b = mod(b, c);
    const i64 ga = gcd(a, c);  // gcd(0, c) = c
    if (ga != gcd(b, c) || a % 4 != 0 || b % 4 != 0) return SumValue::zero();

    const i64 ap = a / ga;
    const i64 bp = b / ga;
    const i64 co = fm.c_odd;
    const i64 co_quot = co / gcd(a, co);
    if (co_quot % fm.q != 0) return SumValue::zero();

    const int delta = fm.delta;
    const int chi = jacobi(mulmod(mulmod(ap, bp, fm.q), delta ? 2 : 1, fm.q), fm.q);
    double local = 1.0;
    for (auto [p, e] : fm.odd_factors)
        if (e % 2 == 0 && co_quot % p != 0) local *= 1.0 - 1.0 / static_cast<double>(p);

    // v-sum over units mod 2^{2+delta} with v = bbar' a' mod m2.
    const i64 two_j = i64{1} << fm.j;
    const i64 small = i64{1} << (2 + delta);
    const i64 m2 = gcd(two_j / gcd(a, two_j), small);
    const i64 target = m2 > 1 ? mulmod(mod_inverse(bp, m2), ap, m2) : 0;
    cplx vsum{0.0, 0.0};
    for (i64 v = 1; v < small; v += 2) {
        if (m2 > 1 && mod(v - target, m2) != 0) continue;
        const i64 vc = mulmod(v, co, 8);
        vsum += delta == 0 ? cplx(1.0) + e4(vc) : std::sqrt(2.0) * e8(vc);
    }
    if (std::abs(vsum) < 1e-9) return SumValue::zero();

    const i64 g2 = gcd(a, c / small);
    const cplx twist = e_of(static_cast<double>(mulmod(-(a / 4), b, c)) / static_cast<double>(c));
    const double scale = std::pow(static_cast<double>(c), 1.5) * static_cast<double>(g2) *
                         static_cast<double>(chi) * local;
    return SumValue::of(scale * epsilon(co) * twist * vsum);
}

}  // namespace ntcheck
