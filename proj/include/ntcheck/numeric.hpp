/// @file numeric.hpp
/// Small numerical helpers shared by the modules.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "ntcheck/arith.hpp"

namespace ntcheck {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Neumaier compensated sum of doubles.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    CompensatedComplexSum& operator+=(cplx z) {
        add(z);
        return *this;
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

/// e(x) = exp(2 pi i x).
inline cplx e_of(double x) { return std::polar(1.0, kTwoPi * x); }

/// Table of e(k/c) for k mod c; indices are reduced exactly in integers.
class UnitRoots {
public:
    explicit UnitRoots(i64 c);
    i64 modulus() const { return c_; }
    /// e(n/c) for any integer n.
    cplx operator()(i64 n) const { return table_[static_cast<std::size_t>(mod(n, c_))]; }
    /// e(r/c) for 0 <= r < c.
    cplx at(i64 r) const { return table_[static_cast<std::size_t>(r)]; }

private:
    i64 c_;
    std::vector<cplx> table_;
};

/// splitmix64 step; used to derive independent per-task seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Portable deterministic generator (xoshiro256**). Identical streams on
/// every platform, unlike the std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    i64 integer(i64 lo, i64 hi);
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers store results
/// by index, so output order never depends on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Relative error |x - ref| / max(|ref|, floor).
inline double rel_err(cplx x, cplx ref, double floor = 0.0) {
    double d = std::max(std::abs(ref), floor);
    double diff = std::abs(x - ref);
    return d > 0 ? diff / d : diff;
}

}  // namespace ntcheck
