#include "doctest.h"

#include "ntcheck/arith.hpp"
#include "ntcheck/errors.hpp"

using namespace ntcheck;

namespace {
// Euler's criterion, independent of the reciprocity-based jacobi().
int legendre_euler(i64 m, i64 p) {
    i64 r = powmod(m, (p - 1) / 2, p);
    return r == 0 ? 0 : (r == 1 ? 1 : -1);
}
}  // namespace

TEST_CASE("jacobi examples") {
    CHECK(jacobi(1, 15) == 1);
    CHECK(jacobi(3, 9) == 0);
    CHECK(jacobi(2, 15) == 1);
    CHECK(jacobi(-1, 7) == -1);
    CHECK(jacobi(5, 1) == 1);
    CHECK_THROWS_AS(jacobi(3, 8), PreconditionError);
    CHECK_THROWS_AS(jacobi(3, -3), PreconditionError);
}

TEST_CASE("jacobi is the product of Euler-criterion Legendre symbols") {
    for (i64 n = 1; n <= 10000; n += 2) {
        auto f = factorize(n);
        bool small = true;
        for (auto [p, e] : f) small = small && p <= 97;
        if (!small) continue;
        for (i64 m = -60; m <= 60; m += 7) {
            int expect = 1;
            for (auto [p, e] : f)
                for (int k = 0; k < e; ++k) expect *= legendre_euler(m, p);
            REQUIRE(jacobi(m, n) == expect);
        }
    }
}

TEST_CASE("quadratic reciprocity for odd coprime m, n <= 500") {
    for (i64 m = 1; m <= 500; m += 2)
        for (i64 n = 1; n <= 500; n += 2) {
            if (gcd(m, n) != 1) continue;
            int sign = (((m - 1) / 2) * ((n - 1) / 2)) % 2 ? -1 : 1;
            REQUIRE(jacobi(m, n) * jacobi(n, m) == sign);
        }
}

TEST_CASE("epsilon") {
    CHECK(epsilon(5) == cplx(1, 0));
    CHECK(epsilon(7) == cplx(0, 1));
    CHECK(epsilon(1) == cplx(1, 0));
    CHECK_THROWS_AS(epsilon(4), PreconditionError);
    for (i64 c = 1; c <= 10000; c += 2) {
        cplx e2 = epsilon(c) * epsilon(c);
        REQUIRE(e2 == cplx(jacobi(-1, c), 0));
    }
}

TEST_CASE("mod_inverse and helpers") {
    CHECK(mod_inverse(3, 16) == 11);
    CHECK(mod_inverse(1, 7) == 1);
    CHECK(mod_inverse(-3, 16) == 5);
    CHECK_THROWS_AS(mod_inverse(4, 16), NotInvertibleError);
    CHECK(valuation(48, 2) == 4);
    CHECK(gcd(0, 12) == 12);
    CHECK(radical(72) == 6);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(euler_phi(36) == 12);
    CHECK(divisors(12) == std::vector<i64>{1, 2, 3, 4, 6, 12});
    CHECK(is_squarefree(30));
    CHECK_FALSE(is_squarefree(18));
    CHECK_THROWS_AS(mul_checked(i64{1} << 40, i64{1} << 40), OverflowError);
    CHECK(mulmod(i64{1} << 40, i64{1} << 40, 1000000007) ==
          static_cast<i64>((static_cast<__int128>(1) << 80) % 1000000007));
}

TEST_CASE("factor_modulus examples") {
    auto f16 = factor_modulus(16);
    CHECK(f16.j == 4);
    CHECK(f16.c_odd == 1);
    CHECK(f16.delta == 0);
    CHECK(f16.q == 1);
    CHECK(f16.r1 == 1);
    CHECK(f16.r2 == 1);

    auto f = factor_modulus(2448);
    CHECK(f.j == 4);
    CHECK(f.delta == 0);
    CHECK(f.c_odd == 153);
    CHECK(f.q == 17);
    CHECK(f.r1 == 1);
    CHECK(f.r2 == 3);
    CHECK(f.c_sq == 3);

    auto g = factor_modulus(200);
    CHECK(g.j == 3);
    CHECK(g.delta == 1);
    CHECK(g.c_odd == 25);
    CHECK(g.q == 1);
    CHECK(g.r2 == 5);
    CHECK(g.c1 == 20);
    CHECK(g.c2 == 10);

    auto one = factor_modulus(1);
    CHECK(one.c_odd == 1);
    CHECK(one.c1 == 1);
    CHECK_THROWS_AS(factor_modulus(0), PreconditionError);
    CHECK_THROWS_AS(factor_modulus((i64{1} << 31) + 1), PreconditionError);
}

TEST_CASE("factor_modulus round trip for c <= 1e5") {
    for (i64 c = 1; c <= 100000; ++c) {
        auto f = factor_modulus(c);
        REQUIRE((i64{1} << f.j) * f.c_odd == c);
        REQUIRE(f.c_odd % 2 == 1);
        REQUIRE(f.delta == f.j % 2);
        REQUIRE(f.q * f.r1 * f.r1 * f.r2 * f.r2 == f.c_odd);
        REQUIRE(is_squarefree(f.q));
        REQUIRE(gcd(f.q, f.r2) == 1);
        REQUIRE(f.q % radical(f.r1) == 0);
        REQUIRE(f.c1 * f.c2 == c);
        REQUIRE((f.c1 * f.c1) % c == 0);
        REQUIRE(f.c1 % f.c2 == 0);
        REQUIRE(is_squarefree(f.c1 / f.c2));
        // c* and c_sq partition the primes of c_o by exponent parity.
        REQUIRE(gcd(f.q, f.c_sq) == 1);
        REQUIRE(f.q * f.c_sq == radical(f.c_odd));
    }
}
