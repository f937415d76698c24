/// @file arith.hpp
/// Integer arithmetic on 64-bit values: gcd, inverses, Jacobi symbols,
/// factorization by trial division and the modulus decompositions used by
/// the character sum formulas.
#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace ntcheck {

using i64 = std::int64_t;
using cplx = std::complex<double>;

/// Largest modulus accepted by the character-sum layer.
inline constexpr i64 kMaxModulus = i64{1} << 31;
/// Largest integer accepted by factorize().
inline constexpr i64 kMaxFactorable = i64{1000000} * 1000000;

i64 mul_checked(i64 a, i64 b);
i64 add_checked(i64 a, i64 b);

/// Least nonnegative residue of a mod c (c >= 1).
i64 mod(i64 a, i64 c);
/// a*b mod c for c <= 2^62 without overflow.
i64 mulmod(i64 a, i64 b, i64 c);
i64 powmod(i64 a, i64 e, i64 c);

/// Nonnegative gcd; gcd(0, 0) = 0.
i64 gcd(i64 a, i64 b);

/// Inverse of a modulo c; throws NotInvertibleError if gcd(a, c) > 1.
i64 mod_inverse(i64 a, i64 c);

/// Exponent of p in n (n != 0, p >= 2).
int valuation(i64 n, i64 p);

/// Jacobi symbol (m/n) for odd n >= 1. Negative m is reduced mod n.
int jacobi(i64 m, i64 n);

/// epsilon_c for odd c: 1 if c = 1 mod 4, i if c = 3 mod 4.
cplx epsilon(i64 c);

/// Primes up to 10^6, computed once.
const std::vector<int>& small_primes();

using Factorization = std::vector<std::pair<i64, int>>;

/// Prime factorization of n in increasing order (1 <= n <= kMaxFactorable).
Factorization factorize(i64 n);

bool is_squarefree(i64 n);
/// Product of the distinct primes dividing n.
i64 radical(i64 n);
int mobius(i64 n);
i64 euler_phi(i64 n);
/// Sorted positive divisors.
std::vector<i64> divisors(i64 n);

/// Decomposition of a modulus c = 2^j c_o used by the Gauss and T sums.
///
/// c_o = q r1^2 r2^2 where q = c* is the product of primes with odd exponent,
/// r1 collects p^((e-1)/2) for those primes and r2 collects p^(e/2) for the
/// primes with even exponent. c_sq is the product of the primes with even
/// exponent. Independently c = A B^2 with A squarefree, c1 = AB, c2 = B.
struct FactoredModulus {
    i64 c = 1;
    int j = 0;       ///< 2-adic valuation
    int delta = 0;   ///< j mod 2
    i64 c_odd = 1;   ///< c_o
    i64 q = 1;       ///< c*
    i64 r1 = 1;
    i64 r2 = 1;
    i64 c_sq = 1;    ///< product of primes with even exponent in c_o
    i64 c1 = 1;
    i64 c2 = 1;
    Factorization odd_factors;
};

/// Throws PreconditionError for c < 1 or c > kMaxModulus.
FactoredModulus factor_modulus(i64 c);

}  // namespace ntcheck
