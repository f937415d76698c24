#include "ntcheck/special.hpp"

#include <array>
#include <cmath>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

namespace ntcheck {

namespace {
constexpr std::array<double, 21> kB2k = {
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
};
constexpr int kEulerMaclaurinTerms = 12;
}  // namespace

double bernoulli_2k(int k) {
    if (k < 0 || k > 20) throw PreconditionError("bernoulli_2k: k out of range");
    return kB2k[static_cast<std::size_t>(k)];
}

Estimate hurwitz_zeta(cplx s, double a) {
    if (!(a > 0.0 && a <= 1.0)) throw PreconditionError("hurwitz_zeta: a must lie in (0, 1]");
    if (std::abs(s - 1.0) < 1e-14) throw SingularityError("hurwitz_zeta: pole at s = 1");
    // Head length N keeps |s + 2k| / (2 pi (N + a)) small for all k used.
    const int N = 20 + static_cast<int>(std::ceil(std::abs(s)));
    CompensatedComplexSum acc;
    for (int n = N - 1; n >= 0; --n) acc.add(std::exp(-s * std::log(n + a)));
    const double x = N + a;
    const double lx = std::log(x);
    const cplx xs = std::exp(-s * lx);  // x^{-s}
    acc.add(x * xs / (s - 1.0));
    acc.add(0.5 * xs);
    cplx rising = s;        // s (s+1) ... (s + 2k - 2)
    cplx power = xs / x;    // x^{-s-2k+1}
    double fact = 2.0;      // (2k)!
    double last = 0.0;
    for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
        cplx term = kB2k[static_cast<std::size_t>(k)] / fact * rising * power;
        acc.add(term);
        last = std::abs(term);
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        power /= x * x;
        fact *= double(2 * k + 1) * double(2 * k + 2);
    }
    return {acc.value(), 2.0 * last + 1e-16 * std::abs(acc.value())};
}

Estimate riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

Estimate dirichlet_l(cplx s, const std::function<int(i64)>& chi, i64 modulus) {
    if (modulus < 1) throw PreconditionError("dirichlet_l: modulus must be positive");
    CompensatedComplexSum acc;
    double err = 0.0;
    for (i64 a = 1; a <= modulus; ++a) {
        int c = chi(a);
        if (c == 0) continue;
        Estimate h = hurwitz_zeta(s, double(a) / double(modulus));
        acc.add(double(c) * h.value);
        err += h.error;
    }
    const cplx scale = std::exp(-s * std::log(double(modulus)));
    return {scale * acc.value(), std::abs(scale) * err};
}

cplx log_gamma(cplx z) {
    if (z.real() <= 0.0) throw PreconditionError("log_gamma: requires Re z > 0");
    // Shift to Re z >= 15, then Stirling with B_{2k} corrections.
    cplx shift{0.0, 0.0};
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx series{0.0, 0.0};
    cplx p = inv;
    for (int k = 1; k <= 10; ++k) {
        series += kB2k[static_cast<std::size_t>(k)] / (double(2 * k) * double(2 * k - 1)) * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series - shift;
}

}  // namespace ntcheck
