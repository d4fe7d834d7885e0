#pragma once

#include "lcorr/arith.hpp"
#include "lcorr/correlation.hpp"
#include "lcorr/policy.hpp"

#include <string>
#include <vector>

namespace lcorr {

/// One side-by-side comparison of two independently evaluated expressions.
struct IdentityReport {
    std::string name;
    std::string parameters;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_diff = 0.0;
    double tol = 0.0;
    bool pass = false;  ///< abs_diff <= tol
};

IdentityReport make_report(std::string name, std::string parameters, double lhs, double rhs, double tol);

/// Polylog identities need x > 2^{1/6}; inputs within this margin of the boundary are rejected.
inline constexpr double kPolylogIdentityMargin = 1e-3;

/// sum_{n>1, mu(n)=sign} n^{-v} Li_v(x^{-n}); sign = 0 gives the signed sum
/// sum_{n>1} mu(n) n^{-v} Li_v(x^{-n}). Throws DomainError near or below x = 2^{1/6}.
Estimate mobius_class_polylog_sum(double v, double x, int sign, const TruncationPolicy& policy);
Estimate mobius_even_polylog_sum(double v, double x, const TruncationPolicy& policy);
Estimate mobius_odd_polylog_sum(double v, double x, const TruncationPolicy& policy);

/// sum_n mu(n) sum_{m<n, m does not divide n} mu(m) J^{-v} Li_v(x^{-J}) with J = nm
/// (literal) or J = lcm(n, m) (reduced). Only the reduced form equals the even
/// sum for non-coprime pairs.
Estimate non_divisor_polylog_sum(double v, double x, const TruncationPolicy& policy,
                                 PairingRule rule = PairingRule::literal);

/// Even Mobius class sum against the non-divisor sum.
IdentityReport even_class_identity(double v, double x, double tol, const TruncationPolicy& policy,
                                   PairingRule rule = PairingRule::literal);
/// Odd Mobius class sum against Li_v(1/x) - 1/x + non-divisor sum.
IdentityReport odd_class_identity(double v, double x, double tol, const TruncationPolicy& policy,
                                  PairingRule rule = PairingRule::literal);
/// Even minus odd class sums against the signed sum.
IdentityReport parity_partition(double v, double x, double tol, const TruncationPolicy& policy);
/// sum_{n>=1} mu(n) n^{-v} Li_v(z^n) against z.
IdentityReport mobius_reconstruction(double v, double z, double tol, const TruncationPolicy& policy);

/// Even and odd identities on every (v, x) pair, evaluated in parallel. Points
/// that throw are reported as failures with the message as parameters.
std::vector<IdentityReport> class_identity_grid(const std::vector<double>& vs, const std::vector<double>& xs,
                                                double tol, const TruncationPolicy& policy,
                                                PairingRule rule = PairingRule::literal);

/// sum_{n>1, mu(n)=1} R(n,n)/n^2 against the non-divisor cross sum of
/// self-covariances. Requires sigma > 1/4.
IdentityReport non_divisor_symmetry(double sigma, const PrincipalCharacter& chi, double tol,
                                    const TruncationPolicy& policy, PairingRule rule = PairingRule::literal);

/// R_{chi0 mod M}(n,n,sigma) - R_{chi0 mod pM}(n,n,sigma) against Li_2(p^{-2n sigma}) / 2.
/// Throws PreconditionError unless p is a prime not dividing M.
IdentityReport euler_factor_removal(std::int64_t n, double sigma, std::int64_t modulus, std::int64_t p,
                                    double tol, const TruncationPolicy& policy);

struct OrderShiftReport {
    IdentityReport integral;    ///< int_{log x}^inf Li_v(e^{-alpha u}) du against Li_{v+1}(x^{-alpha}) / alpha
    IdentityReport derivative;  ///< central difference of Li_v(e^{-alpha u}) against -alpha Li_{v-1}(e^{-alpha u})
};

inline constexpr double kOrderShiftIntegralTol = 1e-8;
inline constexpr double kOrderShiftDerivativeTol = 1e-6;
inline constexpr double kOrderShiftStep = 1e-4;

/// Gauss-Kronrod quadrature on [log x, log x + 40/alpha] plus a certified tail,
/// and a central difference with step 1e-4 at u = log x. Requires log x > 2e-4.
OrderShiftReport polylog_order_shift(double v, double x, std::int64_t alpha, const TruncationPolicy& policy);

}  // namespace lcorr
