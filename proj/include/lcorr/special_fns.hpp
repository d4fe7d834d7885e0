#pragma once

#include "lcorr/arith.hpp"
#include "lcorr/policy.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace lcorr {

/// s = sigma + i t.
struct ComplexPoint {
    double sigma = 0.0;
    double t = 0.0;
};

// ---------------------------------------------------------------------------
// Polylogarithm
// ---------------------------------------------------------------------------

/// Li_v(z) = sum_{k>=1} z^k / k^v for real order v and 0 <= z < 1.
///
/// The tail after K terms is bounded by a_{K+1} / (1 - r) where r bounds the
/// term ratio from K+1 on; for v <= 0 the ratio ((k+1)/k)^{|v|} z is used,
/// which is eventually below 1 for every z < 1.
Estimate polylog(double v, double z, const TruncationPolicy& policy);

/// Li_2(y) for 0 <= y <= 0.9, summed to full double precision. No certificate;
/// used inside prime sums where every term is small.
double li2_small(double y) noexcept;

// ---------------------------------------------------------------------------
// Riemann zeta and eta
// ---------------------------------------------------------------------------

/// eta(x) = sum (-1)^{k+1} / k^x for real x > 0, by Borwein's accelerated
/// alternating series.
Estimate eta_real(double x, const TruncationPolicy& policy);

/// zeta(x) for real x > 0, x != 1, as eta(x) / (1 - 2^{1-x}).
/// Throws SingularityError within policy.singular_radius of x = 1.
Estimate zeta_real(double x, const TruncationPolicy& policy);

/// zeta(x) - 1 with full relative precision for large x.
double zeta_minus_one(double x, const TruncationPolicy& policy);

/// log|zeta(x)| for real x > 0, x != 1.
double log_abs_zeta_real(double x, const TruncationPolicy& policy);

struct ComplexEstimate {
    std::complex<double> value;
    double error_bound = 0.0;
};

/// zeta(s) for Re(s) > 0, s away from 1. Small |Im s| uses the accelerated
/// alternating series; large |Im s| uses Euler-Maclaurin summation, since the
/// alternating series needs O(|t|) terms and its bound grows like e^{pi|t|/2}.
ComplexEstimate zeta_complex(std::complex<double> s, const TruncationPolicy& policy);

/// Accelerated alternating-series route only; |Im s| must not exceed kBorweinMaxAbsT.
ComplexEstimate zeta_borwein(std::complex<double> s, double tol);
/// Euler-Maclaurin route only.
ComplexEstimate zeta_euler_maclaurin(std::complex<double> s, double tol);

inline constexpr double kBorweinMaxAbsT = 64.0;

/// zeta(sigma + i t) for one fixed sigma and many t, with n^{-sigma} and log n
/// tabulated once. Immutable after construction and safe to share.
class ZetaLine {
public:
    ZetaLine(double sigma, double max_abs_t, const TruncationPolicy& policy);

    double sigma() const noexcept { return sigma_; }
    ComplexEstimate operator()(double t) const;

private:
    double sigma_;
    double tol_;
    TruncationPolicy policy_;
    std::vector<double> magnitude_;  // n^{-sigma}, index n
    std::vector<double> log_n_;
};

// ---------------------------------------------------------------------------
// L(s, chi_0) along lines
// ---------------------------------------------------------------------------

/// log|L(x, chi_0)| for real x > 0, x != 1.
double log_abs_L_real(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy);

struct LineValue {
    double value = 0.0;     ///< log|L(s, chi_0)|
    double abs_zeta = 0.0;  ///< |zeta(s)|
    bool near_zero = false; ///< |zeta(s)| below kNearZeroThreshold
};

inline constexpr double kNearZeroThreshold = 1e-8;

/// log|L(sigma + i t, chi_0)| = log|zeta(s)| + sum_{p | M} log|1 - p^{-s}|.
LineValue log_abs_L_line(ComplexPoint point, const PrincipalCharacter& chi, const TruncationPolicy& policy);

/// Same, reusing a tabulated ZetaLine for the point's sigma.
LineValue log_abs_L_line(const ZetaLine& line, double t, const PrincipalCharacter& chi);

// ---------------------------------------------------------------------------
// Prime zeta / prime-L sums
// ---------------------------------------------------------------------------

/// Majorant for sum_{m >= q} m^{-y}, y > 1: q^{-y} (1 + q / (y - 1)).
double integer_tail_majorant(double y, double q) noexcept;

/// sum over primes p outside `excluded` of p^{-s}, through Mobius inversion of
/// log|zeta(ns) prod_{p in excluded} (1 - p^{-ns})|. Valid for s > 0 away from
/// the points n s = 1; for s <= 1 it is the real part of the continuation.
/// `first_included` is the least prime not excluded. `excluded` and `extra`
/// together list the excluded primes.
Estimate mobius_prime_sum(double s, std::span<const std::int64_t> excluded, std::span<const std::int64_t> extra,
                          std::int64_t first_included, const TruncationPolicy& policy);

/// P_chi0(sigma) = sum_{p not dividing M} p^{-sigma}, sigma > 1. Primes up to
/// prime_limit are summed directly; if the integral bound on the rest still
/// exceeds abs_tol, the remainder is evaluated by Mobius inversion over the
/// partial Euler product.
Estimate prime_zeta_series(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy);

/// P_chi0(sigma) = sum_n mu(n)/n log|L(n sigma, chi_0)|, sigma > 0.
/// Throws SingularityError when n sigma is within singular_radius of 1.
Estimate prime_zeta_continued(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy);

/// Series for sigma > 1, continuation otherwise.
Estimate prime_zeta(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy);

/// sum_{p not dividing M} Li_2(p^{-sigma}), sigma > 1.
Estimate li2_prime_sum(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy);

}  // namespace lcorr
