#include "ntcheck/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ntcheck/errors.hpp"

namespace ntcheck {

i64 mul_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("integer overflow in multiplication");
    return r;
}

i64 add_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("integer overflow in addition");
    return r;
}

i64 mod(i64 a, i64 c) {
    if (c < 1) throw PreconditionError("modulus must be positive");
    i64 r = a % c;
    return r < 0 ? r + c : r;
}

i64 mulmod(i64 a, i64 b, i64 c) {
    return static_cast<i64>(static_cast<__int128>(mod(a, c)) * mod(b, c) % c);
}

i64 powmod(i64 a, i64 e, i64 c) {
    if (e < 0) throw PreconditionError("negative exponent");
    i64 result = 1 % c;
    i64 base = mod(a, c);
    while (e > 0) {
        if (e & 1) result = mulmod(result, base, c);
        base = mulmod(base, base, c);
        e >>= 1;
    }
    return result;
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 mod_inverse(i64 a, i64 c) {
    if (c < 1) throw PreconditionError("modulus must be positive");
    i64 r0 = c, r1 = mod(a, c);
    i64 s0 = 0, s1 = 1;
    while (r1 != 0) {
        i64 qt = r0 / r1;
        i64 t = r0 - qt * r1;
        r0 = r1;
        r1 = t;
        t = s0 - qt * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) {
        if (c == 1) return 0;
        throw NotInvertibleError("mod_inverse: gcd(" + std::to_string(a) + ", " +
                                 std::to_string(c) + ") = " + std::to_string(r0));
    }
    return mod(s0, c);
}

int valuation(i64 n, i64 p) {
    if (n == 0 || p < 2) throw PreconditionError("valuation needs n != 0, p >= 2");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int jacobi(i64 m, i64 n) {
    if (n < 1 || n % 2 == 0) throw PreconditionError("jacobi: n must be odd and positive");
    i64 a = mod(m, n);
    int s = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

cplx epsilon(i64 c) {
    if (c % 2 == 0) throw PreconditionError("epsilon: c must be odd");
    return mod(c, 4) == 1 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
}

const std::vector<int>& small_primes() {
    static const std::vector<int> primes = [] {
        constexpr int limit = 1000000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<int> out;
        for (int i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (long long k = static_cast<long long>(i) * i; k <= limit; k += i)
                composite[static_cast<std::size_t>(k)] = true;
        }
        return out;
    }();
    return primes;
}

Factorization factorize(i64 n) {
    if (n < 1 || n > kMaxFactorable)
        throw PreconditionError("factorize: n out of range: " + std::to_string(n));
    Factorization f;
    for (int p : small_primes()) {
        if (static_cast<i64>(p) * p > n) break;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

bool is_squarefree(i64 n) {
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

i64 radical(i64 n) {
    i64 r = 1;
    for (auto [p, e] : factorize(n)) r *= p;
    return r;
}

int mobius(i64 n) {
    int m = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> d{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t base = d.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

FactoredModulus factor_modulus(i64 c) {
    if (c < 1 || c > kMaxModulus)
        throw PreconditionError("modulus out of range: " + std::to_string(c));
    FactoredModulus fm;
    fm.c = c;
    i64 co = c;
    while (co % 2 == 0) {
        co /= 2;
        ++fm.j;
    }
    fm.delta = fm.j % 2;
    fm.c_odd = co;
    fm.odd_factors = factorize(co);
    for (auto [p, e] : fm.odd_factors) {
        i64 half = 1;
        for (int k = 0; k < e / 2; ++k) half *= p;
        if (e % 2) {
            fm.q *= p;
            fm.r1 *= half;
        } else {
            fm.r2 *= half;
            fm.c_sq *= p;
        }
    }
    // c = A B^2 with A squarefree, over all primes including 2.
    auto split = [&](i64 p, int e) {
        i64 half = 1;
        for (int k = 0; k < e / 2; ++k) half *= p;
        fm.c2 *= half;
        fm.c1 *= half * (e % 2 ? p : 1);
    };
    if (fm.j > 0) split(2, fm.j);
    for (auto [p, e] : fm.odd_factors) split(p, e);
    return fm;
}

}  // namespace ntcheck
