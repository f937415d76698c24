/// @file charsums.hpp
/// Gauss, Kloosterman and real-character sums, and the double sum
/// T(a,b;c) = sum_{x,y mod c} S(x^2, y^2; c) e_c(2xy + ax + by).
///
/// Every closed form has a brute-force oracle beside it.
#pragma once

#include <complex>

#include "ntcheck/arith.hpp"

namespace ntcheck {

struct SumValue {
    cplx value{0.0, 0.0};
    bool is_exact_zero = false;

    static SumValue zero() { return {cplx{0.0, 0.0}, true}; }
    static SumValue of(cplx v) { return {v, false}; }
};

/// sum_{x mod c} e(a x^2 / c).
SumValue gauss_sum_oracle(i64 a, i64 c);

/// Closed form for gcd(a, c) = 1 with c odd or 4 | c.
/// Throws UnsupportedModulusError when 2 || c.
SumValue gauss_sum_closed(i64 a, i64 c);

/// S(m, n; c) by direct summation over units.
SumValue kloosterman(i64 m, i64 n, i64 c);

/// Real character chi = chi* chi_0: chi* = (. / q_star) with q_star odd
/// squarefree (primitive), chi_0 trivial mod q0, gcd(q_star, q0) = 1.
/// The modulus q must be divisible by q_star and q0 and have no other primes.
struct RealCharacter {
    i64 q = 1;
    i64 q_star = 1;
    i64 q0 = 1;

    int operator()(i64 n) const;
    /// chi*(n) alone.
    int primitive(i64 n) const;
    void validate() const;
};

/// sum_{n mod q, n = a mod d} chi(n) from the closed form.
SumValue char_sum_ap(const RealCharacter& chi, i64 a, i64 d);
/// Same value as an exact integer.
i64 char_sum_ap_exact(const RealCharacter& chi, i64 a, i64 d);
/// Direct summation over n mod q.
i64 char_sum_ap_direct(const RealCharacter& chi, i64 a, i64 d);

/// Largest modulus accepted by t_sum_oracle / t_sum_naive.
inline constexpr i64 kTOracleMaxModulus = 4096;
inline constexpr i64 kTNaiveMaxModulus = 256;

/// T(a,b;c) through the collapse
///   T = c sum*_{t mod c, bt = a (c)} sum_{x mod c} e_c(t x^2 + a x).
SumValue t_sum_oracle(i64 a, i64 b, i64 c);
/// T(a,b;c) straight from the definition (c <= 256).
SumValue t_sum_naive(i64 a, i64 b, i64 c);

/// Closed form; requires 16 | c.
SumValue t_sum_closed(i64 a, i64 b, i64 c);
SumValue t_sum_closed(i64 a, i64 b, const FactoredModulus& fm);

}  // namespace ntcheck
