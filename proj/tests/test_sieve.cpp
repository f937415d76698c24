#include "doctest.h"

#include <cmath>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"
#include "ntcheck/sieve.hpp"
#include "ntcheck/special.hpp"

using namespace ntcheck;

TEST_CASE("odd squarefree list") {
    const auto v = odd_squarefree_up_to(30);
    CHECK(v == std::vector<i64>{1, 3, 5, 7, 11, 13, 15, 17, 19, 21, 23, 29});
    CHECK(odd_squarefree_up_to(0).empty());
}

TEST_CASE("jacobi table agrees with arith") {
    const JacobiTable table(4096, 4096);
    Rng rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const i64 m = 2 * rng.integer(0, 2047) + 1, n = rng.integer(0, 4096);
        REQUIRE(table(n, m) == jacobi(n, m));
    }
    CHECK_THROWS_AS(table.row(8), PreconditionError);
    CHECK_THROWS_AS(JacobiTable(1 << 17, 4), PreconditionError);
}

TEST_CASE("single spike counts coprime moduli") {
    SieveScanConfig cfg;
    cfg.M = 300;
    cfg.N = 200;
    cfg.trials = 20;
    cfg.mode = CoefficientMode::SingleSpike;
    const auto rep = large_sieve_ratio(cfg);
    for (const auto& tr : rep.trials) {
        double count = 0;
        for (i64 m : odd_squarefree_up_to(cfg.M)) count += gcd(m, tr.spike) == 1;
        CHECK(tr.lhs == count);
        CHECK(tr.ratio < 1.0);
    }
}

TEST_CASE("N = 1 gives the modulus count") {
    SieveScanConfig cfg;
    cfg.M = 500;
    cfg.N = 1;
    cfg.trials = 3;
    const auto rep = large_sieve_ratio(cfg);
    const double count = double(odd_squarefree_up_to(500).size());
    for (const auto& tr : rep.trials) {
        CHECK(std::abs(tr.lhs - count * tr.normalizer / 501.0) < 1e-9 * tr.lhs);
        CHECK(tr.ratio < 1.0);
    }
}

TEST_CASE("sieve ratios, modes and determinism") {
    SieveScanConfig cfg;
    cfg.M = cfg.N = 512;
    cfg.trials = 40;
    cfg.seed = 9;
    const auto g = large_sieve_ratio(cfg);
    CHECK(g.max_ratio <= 10.0);
    CHECK(g.median_ratio <= g.q90_ratio);
    CHECK(g.q90_ratio <= g.max_ratio);
    for (const auto& tr : g.trials) CHECK(tr.lhs >= 0.0);

    cfg.jobs = 3;
    const auto g3 = large_sieve_ratio(cfg);
    for (std::size_t i = 0; i < g.trials.size(); ++i) CHECK(g.trials[i].lhs == g3.trials[i].lhs);

    cfg.mode = CoefficientMode::CharacterSpike;
    CHECK(large_sieve_ratio(cfg).max_ratio <= 4.0 * g.max_ratio);
    cfg.mode = CoefficientMode::RandomUnit;
    CHECK(large_sieve_ratio(cfg).max_ratio <= 10.0);

    CHECK(coefficient_mode_from_string("character_spike") == CoefficientMode::CharacterSpike);
    CHECK_THROWS_AS(coefficient_mode_from_string("spiky"), ConfigError);
}

TEST_CASE("quadratic L values") {
    const cplx z = quadratic_L_value(1, 0.0);
    CHECK(std::abs(z - cplx(-1.4603545088095868, 0.0)) < 1e-10);
    CHECK(quadratic_L_value(5, 0.0).real() > 0.0);
    CHECK(std::abs(quadratic_L_value(15, 0.0).imag()) < 1e-12);
    for (i64 m : {1, 3, 5, 11, 21, 33, 47})
        for (double t : {0.0, 3.0, 25.0}) {
            const cplx afe = quadratic_L_value(m, t);
            const auto em = dirichlet_l(cplx(0.5, t), [m](i64 n) { return jacobi(n, m); }, m);
            CAPTURE(m);
            CAPTURE(t);
            CHECK(std::abs(afe - em.value) < 1e-6);
        }
    CHECK_THROWS_AS(quadratic_L_value(9, 0.0), PreconditionError);
    CHECK_THROWS_AS(quadratic_L_value(3, 2000.0), PreconditionError);
}

TEST_CASE("weighted second moment") {
    const auto one = weighted_second_moment(1, 10.0);
    CHECK(one.count == 1);
    CHECK(std::abs(one.sum - std::norm(riemann_zeta(cplx(0.5, 10.0)).value)) < 1e-9);

    const auto a = weighted_second_moment(500, 0.0), b = weighted_second_moment(1000, 0.0);
    CHECK(a.ratio <= 10.0);
    CHECK(b.ratio <= 10.0);
    CHECK(b.sum <= 2.0 * std::sqrt(2.0) * 1.2 * a.sum);
    CHECK(b.sum > a.sum);
}
