/// @file sieve.hpp
/// Quadratic large sieve scans over odd squarefree moduli, and central values
/// of quadratic L-functions by a smoothed approximate functional equation.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ntcheck/arith.hpp"

namespace ntcheck {

inline constexpr i64 kSieveMaxSize = i64(1) << 16;

/// Odd squarefree integers in [1, n].
std::vector<i64> odd_squarefree_up_to(i64 n);

/// Values (n/m) for odd m <= M and 0 <= n <= N. Rows are built from (p/m) at
/// primes p and complete multiplicativity in n, so a row costs pi(N) Jacobi
/// symbols plus N products.
class JacobiTable {
public:
    JacobiTable(i64 M, i64 N);

    i64 M() const { return M_; }
    i64 N() const { return N_; }
    /// Row of (n/m) for n = 0..N.
    std::vector<std::int8_t> row(i64 m) const;
    int operator()(i64 n, i64 m) const;

private:
    i64 M_, N_;
    std::vector<std::int32_t> spf_;  // smallest prime factor, n <= N
};

enum class CoefficientMode { RandomUnit, RandomGaussian, SingleSpike, CharacterSpike };

const char* to_string(CoefficientMode m);
/// Throws ConfigError on an unknown name.
CoefficientMode coefficient_mode_from_string(const std::string& s);

struct SieveScanConfig {
    i64 M = 1024, N = 1024;
    int trials = 200;
    CoefficientMode mode = CoefficientMode::RandomGaussian;
    std::uint64_t seed = 1;
    int jobs = 1;

    void validate() const;
};

struct SieveTrial {
    int trial = 0;
    double lhs = 0.0;
    double normalizer = 0.0;  ///< (M + N) sum |a_n|^2
    double ratio = 0.0;
    double eps_ratio = 0.0;   ///< ratio / (M N)^{0.1}
    i64 spike = 0;            ///< n0 for single_spike, m0 for character_spike
};

struct SieveReport {
    SieveScanConfig config;
    std::vector<SieveTrial> trials;
    double max_ratio = 0.0, median_ratio = 0.0, q90_ratio = 0.0;
    double max_eps_ratio = 0.0;
};

/// sum*_m |sum*_n a_n (n/m)|^2 over odd squarefree m <= M, n <= N.
SieveReport large_sieve_ratio(const SieveScanConfig& cfg);

// ---- Central values ----

inline constexpr i64 kLValueMaxConductor = 10'000;
inline constexpr double kLValueMaxHeight = 1000.0;

/// L(1/2 + it, (./m)) for odd squarefree m <= 1e4 and |t| <= 1e3.
cplx quadratic_L_value(i64 m, double t);

/// Shares the approximate functional equation weights across moduli at a
/// fixed height.
class QuadraticLFamily {
public:
    QuadraticLFamily(double t, i64 m_max);
    cplx operator()(i64 m) const;
    /// Number of terms used in each AFE sum for conductor m.
    i64 length(i64 m) const;

    class Weight;

private:
    double t_;
    i64 m_max_, n_max_;
    std::vector<std::shared_ptr<const Weight>> w_;  // [kappa][sign of t]
    std::vector<cplx> n_pow_;                        // n^{-1/2 - it}
    std::vector<std::int32_t> spf_;
};

struct MomentReport {
    i64 M = 0;
    double t = 0.0;
    i64 count = 0;              ///< odd squarefree m <= M
    double sum = 0.0;           ///< sum m^{-1/2} |L(1/2 + it, (./m))|^2
    double raw_ratio = 0.0;     ///< sum / (M^{1/2} + (1 + |t|)^{1/2})
    double ratio = 0.0;         ///< raw_ratio / (M (1 + |t|))^{0.1}
};

MomentReport weighted_second_moment(i64 M, double t);

}  // namespace ntcheck
