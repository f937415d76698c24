/// @file zseries.hpp
/// Local factors and global Euler-product identity for the Dirichlet series
/// Z_{k,l}, the auxiliary series D and a_p, the 2-adic series Z^(2) in its
/// four cases, and the convergence-domain predicates.
///
/// Every closed form has a truncated-sum oracle with a tail bound.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ntcheck/arith.hpp"
#include "ntcheck/special.hpp"

namespace ntcheck {

/// (s, u1, u2, u3, U) with Re s = 0. alpha and beta are always derived.
class SeriesPoint {
public:
    /// Throws PreconditionError unless Re s = 0 and U >= 0.
    SeriesPoint(cplx s, cplx u1, cplx u2, cplx u3, double U = 0.0);

    /// Point with s = 0, u1 = beta, u2 = u3 = (alpha + 1)/2, U = 0.
    static SeriesPoint from_alpha_beta(cplx alpha, cplx beta);

    cplx s() const { return s_; }
    cplx u1() const { return u1_; }
    cplx u2() const { return u2_; }
    cplx u3() const { return u3_; }
    double U() const { return U_; }

    cplx alpha() const { return u2_ + u3_ - 2.0 * s_ - 1.0; }
    cplx beta() const { return u1_ + s_; }
    /// Exponents of 2^nu and 2^gamma in Z^(2).
    cplx nu_exponent() const { return u2_ - cplx(0.0, U_) - s_; }
    cplx gamma_exponent() const { return u3_ + cplx(0.0, U_) - s_; }

    std::string describe() const;

private:
    cplx s_, u1_, u2_, u3_;
    double U_;
};

enum class Domain { D0, D1, D2, Dinf };

const char* to_string(Domain d);

/// Membership in the domain with every strict inequality L > c replaced by
/// L >= c + margin (margin 0 keeps the strict form).
bool domain_contains(Domain d, const SeriesPoint& pt, double margin = 0.0);

/// Unramified local factor at p not dividing 2kl; chi_p = (p / kl) = +-1.
cplx local_factor_unramified(i64 p, int chi_p, const SeriesPoint& pt);
/// Local factor at p | kl.
cplx local_factor_ramified(i64 p, const SeriesPoint& pt);
/// Same local factor written before the (1 - p^{-2 beta}) cancellation.
cplx local_factor_uncancelled(i64 p, int chi_p, const SeriesPoint& pt);

/// Truncated local multi-sum over r1, r2 <= cutoff. chi_p = 0 selects the
/// ramified form.
Estimate local_factor_oracle(i64 p, int chi_p, const SeriesPoint& pt, int cutoff = 40);

/// Real character mod 8 multiplying (. / kl) in all k, l, q dependencies.
enum class Mod8Twist { None, Principal, Minus4, Plus8, Minus8 };

/// The character n -> (n / kl) eta(n). For Mod8Twist::None, (n / kl)
/// is used for all n, even n included.
struct KLCharacter {
    i64 kl = 1;
    Mod8Twist twist = Mod8Twist::None;

    int operator()(i64 n) const;
    /// Period of the character.
    i64 period() const;
    /// True when the character only takes values in {0, 1}.
    bool is_principal() const;
};

struct DSeriesValue {
    Estimate sum_form;
    Estimate product_form;
};

/// D(alpha, beta, chi) as a Dirichlet sum over odd squarefree n <= sum_cutoff
/// and as an Euler product over odd primes p <= prime_cutoff.
DSeriesValue d_series(const SeriesPoint& pt, const KLCharacter& chi, i64 sum_cutoff,
                      i64 prime_cutoff);

cplx a_p(i64 p, const SeriesPoint& pt);

enum class Z2Case { I, II, III, IV };
enum class Z2Part { Full, Head, Tail };  // Head: lambda - nu <= L, Tail: > L

const char* to_string(Z2Case c);

struct Z2Query {
    Z2Case case_label = Z2Case::I;
    int delta = 0;
    Z2Part part = Z2Part::Full;
    std::optional<int> L;  ///< nullopt means L = infinity; otherwise L >= 3
};

cplx z2_closed(const Z2Query& q, const SeriesPoint& pt);
Estimate z2_oracle(const Z2Query& q, const SeriesPoint& pt, int grid_cutoff = 80);

/// Z_{k,l} from L(beta, chi) zeta(2 alpha + 2 beta) (1 - 2^{-2 alpha - 2 beta})
/// D(alpha, beta, chi) (1 - chi(2) 2^{-beta}) prod_{p | kl} a_p.
Estimate z_kl_product(i64 k, i64 l, const SeriesPoint& pt, Mod8Twist twist = Mod8Twist::None,
                      i64 prime_cutoff = 1000000);

struct ZOracleCutoff {
    i64 q_max = 20000000;  ///< q range for the (r1, r2) = (1, 1) block
};

/// Direct truncated evaluation of the defining multi-sum over r1, r2, g1,
/// g2, q. The q range of each (r1, r2) block is q_max / (r1 r2)^2.
Estimate z_kl_oracle(i64 k, i64 l, const SeriesPoint& pt, Mod8Twist twist = Mod8Twist::None,
                     ZOracleCutoff cutoff = {});

/// Batched form: one pass over q serves every (k, l) pair.
std::vector<Estimate> z_kl_oracle_batch(const std::vector<std::pair<i64, i64>>& kl_pairs,
                                        const SeriesPoint& pt, Mod8Twist twist = Mod8Twist::None,
                                        ZOracleCutoff cutoff = {});

}  // namespace ntcheck
