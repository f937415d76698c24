#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ntcheck/charsums.hpp"
#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

using namespace ntcheck;

namespace {
bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("gauss sum examples") {
    CHECK(close(gauss_sum_oracle(1, 4).value, cplx(2, 2), 1e-12));
    CHECK(close(gauss_sum_oracle(1, 8).value, 2 * std::sqrt(2.0) * cplx(1, 1), 1e-12));
    CHECK(close(gauss_sum_oracle(0, 9).value, cplx(9, 0), 1e-12));
    CHECK(close(gauss_sum_closed(1, 5).value, cplx(std::sqrt(5.0), 0), 1e-12));
    CHECK(close(gauss_sum_closed(1, 7).value, cplx(0, std::sqrt(7.0)), 1e-12));
    CHECK(close(gauss_sum_closed(3, 16).value, cplx(4, -4), 1e-12));
    CHECK(close(gauss_sum_oracle(3, 16).value, cplx(4, -4), 1e-12));
    CHECK_THROWS_AS(gauss_sum_closed(1, 6), UnsupportedModulusError);
    CHECK_THROWS_AS(gauss_sum_closed(3, 9), PreconditionError);
}

TEST_CASE("gauss sum vanishes when 2 || c") {
    for (i64 c = 2; c <= 400; c += 4)
        for (i64 a = 1; a < c; a += 2)
            if (gcd(a, c) == 1) REQUIRE(std::abs(gauss_sum_oracle(a, c).value) < 1e-9);
}

TEST_CASE("gauss sum magnitudes by case") {
    for (i64 c = 1; c <= 600; ++c) {
        if (c % 4 == 2) continue;
        auto fm = factor_modulus(c);
        for (i64 a = 1; a < std::min<i64>(c, 40); ++a) {
            if (gcd(a, c) != 1) continue;
            double mag = std::abs(gauss_sum_closed(a, c).value);
            double expect;
            if (fm.j == 0)
                expect = std::sqrt(double(c));
            else if (fm.delta == 1)
                expect = std::sqrt(2.0 * double(c));
            else
                expect = std::abs(cplx(1.0) + e_of(double(mod(a * fm.c_odd, 4)) / 4.0)) * std::sqrt(double(c));
            REQUIRE(std::abs(mag - expect) <= 1e-9 * expect);
        }
    }
}

TEST_CASE("gauss sum multiplicativity") {
    Rng rng(7);
    int done = 0;
    while (done < 200) {
        i64 c1 = rng.integer(1, 200), c2 = rng.integer(1, 200);
        if (gcd(c1, c2) != 1) continue;
        i64 a = rng.integer(1, c1 * c2);
        if (gcd(a, c1 * c2) != 1) continue;
        cplx lhs = gauss_sum_oracle(a, c1 * c2).value;
        cplx rhs = gauss_sum_oracle(a * c2, c1).value * gauss_sum_oracle(a * c1, c2).value;
        REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
        ++done;
    }
}

TEST_CASE("kloosterman examples and symmetry") {
    CHECK(close(kloosterman(1, 1, 2).value, cplx(1, 0), 1e-12));
    CHECK(close(kloosterman(0, 0, 36).value, cplx(12, 0), 1e-12));
    CHECK(close(kloosterman(1, 1, 3).value, cplx(-1, 0), 1e-12));
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        i64 c = rng.integer(1, 300), m = rng.integer(-500, 500), n = rng.integer(-500, 500);
        cplx s = kloosterman(m, n, c).value;
        REQUIRE(std::abs(s.imag()) < 1e-10);
        REQUIRE(std::abs(s - kloosterman(n, m, c).value) < 1e-9);
    }
}

TEST_CASE("Weil bound") {
    Rng rng(13);
    for (i64 c = 1; c <= 2000; c += 7) {
        double tau = double(divisors(c).size());
        for (int i = 0; i < 10; ++i) {
            i64 m = rng.integer(0, c - 1), n = rng.integer(0, c - 1);
            double g = double(gcd(gcd(m, n), c));
            REQUIRE(std::abs(kloosterman(m, n, c).value) <= tau * std::sqrt(g * double(c)) + 1e-9);
        }
    }
}

TEST_CASE("char_sum_ap examples") {
    CHECK(char_sum_ap_exact({9, 1, 9}, 1, 3) == 3);
    CHECK(char_sum_ap_direct({9, 1, 9}, 1, 3) == 3);
    CHECK(char_sum_ap({15, 5, 3}, 1, 3).is_exact_zero);
    CHECK(char_sum_ap_exact({15, 5, 3}, 2, 15) == jacobi(2, 5));
    CHECK_THROWS_AS(char_sum_ap_exact({15, 5, 3}, 3, 3), PreconditionError);
    CHECK_THROWS_AS(char_sum_ap_exact({15, 5, 3}, 1, 4), PreconditionError);
    CHECK_THROWS_AS(char_sum_ap_exact({15, 9, 1}, 1, 3), PreconditionError);
}

TEST_CASE("char_sum_ap closed form equals direct sum, q <= 300") {
    for (i64 q = 1; q <= 300; ++q) {
        std::vector<i64> odd_primes, all_primes;
        for (auto [p, e] : factorize(q)) {
            all_primes.push_back(p);
            if (p % 2) odd_primes.push_back(p);
        }
        for (unsigned mask = 0; mask < (1u << odd_primes.size()); ++mask) {
            i64 qs = 1;
            for (std::size_t i = 0; i < odd_primes.size(); ++i)
                if (mask >> i & 1) qs *= odd_primes[i];
            i64 q0 = 1;
            for (i64 p : all_primes)
                if (qs % p) q0 *= p;
            RealCharacter chi{q, qs, q0};
            for (i64 d : divisors(q))
                for (i64 a = 0; a < d; ++a)
                    if (gcd(a, d) == 1) REQUIRE(char_sum_ap_exact(chi, a, d) == char_sum_ap_direct(chi, a, d));
        }
    }
}

TEST_CASE("T examples") {
    CHECK(t_sum_oracle(2, 2, 16).is_exact_zero == false);
    CHECK(std::abs(t_sum_oracle(2, 2, 16).value) < 1e-9);
    CHECK(t_sum_closed(2, 2, 16).is_exact_zero);
    CHECK(t_sum_oracle(1, 2, 16).is_exact_zero);
    CHECK(t_sum_closed(1, 2, 16).is_exact_zero);
    CHECK(t_sum_closed(0, 0, 48).is_exact_zero);  // c* = 3 > 1
    CHECK_THROWS_AS(t_sum_closed(4, 4, 8), PreconditionError);
    CHECK_THROWS_AS(t_sum_oracle(4, 4, 5000), PreconditionError);
    CHECK_THROWS_AS(t_sum_naive(4, 4, 512), PreconditionError);
}

TEST_CASE("T oracle agrees with the definition for c <= 112") {
    for (i64 c : {16, 32, 48, 64, 80, 112}) {
        for (i64 a = -8; a <= 8; a += 2)
            for (i64 b = -8; b <= 8; b += 4) {
                cplx o = t_sum_oracle(a, b, c).value;
                cplx n = t_sum_naive(a, b, c).value;
                REQUIRE(std::abs(o - n) <= 1e-9 * std::pow(double(c), 2.5));
            }
    }
}

TEST_CASE("T closed form matches frozen fixture") {
    std::ifstream in(NTCHECK_FIXTURE_DIR "/t_values.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        i64 a = i64(v[0]), b = i64(v[1]), c = i64(v[2]);
        cplx frozen(v[5], v[6]);
        double scale = std::max(std::abs(frozen), std::pow(double(c), 1.5));
        CHECK(std::abs(t_sum_closed(a, b, c).value - frozen) <= 1e-9 * scale);
        CHECK(std::abs(t_sum_oracle(a, b, c).value - frozen) <= 1e-9 * scale);
        ++rows;
    }
    CHECK(rows >= 20);
}

TEST_CASE("T closed form property: random moduli with 16 | c") {
    Rng rng(99);
    for (int i = 0; i < 40; ++i) {
        i64 c = 16 * rng.integer(1, 40);
        auto fm = factor_modulus(c);
        for (int k = 0; k < 10; ++k) {
            i64 g = rng.integer(0, 3) == 0 ? 1 : 4 * rng.integer(1, 4);
            i64 a = g * rng.integer(0, c), b = g * rng.integer(0, c);
            cplx o = t_sum_oracle(a, b, c).value;
            SumValue cl = t_sum_closed(a, b, fm);
            REQUIRE(rel_err(cl.value, o, std::pow(double(c), 1.5)) <= 1e-9);
            // Periodicity in a and b.
            REQUIRE(std::abs(t_sum_closed(a + c, b - 3 * c, fm).value - cl.value) <= 1e-9 * std::pow(double(c), 1.5));
        }
    }
}
