#pragma once

#include "lcorr/arith.hpp"
#include "lcorr/correlation.hpp"
#include "lcorr/policy.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lcorr {

/// Mean square of the gap Re P_chi0(sigma+it) - log|L(sigma+it, chi_0)| over t.
struct GapMseResult {
    double sigma = 0.0;
    Estimate simple;    ///< (1/2) sum_{k>=2} P(2k sigma)/k^2
    Estimate expanded;  ///< Mobius / non-divisor expansion over diagonal self-covariances
    double rms = 0.0;   ///< sqrt(simple)
};

/// (1/2) sum_{k>=2} P_chi0(2k sigma) / k^2 for sigma > 1/4 (every argument exceeds 1).
Estimate mse_simple(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy);

/// sum_{n>=2} mu(n)/n^2 [ -(mu(n)+2) R(n,n) + 2 sum_{m<n, m does not divide n} mu(m)/m^2 R(nm,nm) ]
/// with R the diagonal self-covariance at sigma. R(nm,nm) equals nm R(n,m) only
/// for coprime n, m; PairingRule::reduced substitutes the exact nm R(n,m), which
/// makes the form equal to mse_simple. The outer sum stops when the envelope
/// (1/n^2)(3 R_ub(n) + 2 h(n) R_ub(2n)), summed geometrically, is below abs_tol/2;
/// R_ub(n) = c (q^{-y} + q^{1-y}/(y-1)) / 2 with y = 2n sigma, c = Li_2(q^{-y}) / q^{-y},
/// and h(n) = pi^2/6 - 1 (literal) or max(pi^2/6 - 1, n/4) (reduced).
Estimate mse_expanded(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy,
                      PairingRule rule = PairingRule::literal);

/// sum_{n>=2} c(n) R(n, n) / n^2 for coefficients with |c(n)| <= max_coefficient.
Estimate mobius_self_sum(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy,
                         const std::function<double(std::int64_t)>& coefficient, double max_coefficient);

/// sum_n mu(n)/n^2 sum_{m<n, m does not divide n} mu(m)/m^2 R(nm, nm), or with
/// R(nm, nm) replaced by the exact nm R(n, m) under PairingRule::reduced.
Estimate non_divisor_cross_sum(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy,
                               PairingRule rule = PairingRule::literal);

GapMseResult gap_mse(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy,
                     PairingRule rule = PairingRule::literal);

struct RmsPoint {
    double sigma = 0.0;
    std::optional<GapMseResult> result;  ///< empty when the point is outside the domain
    std::string reason;
};

/// gap_mse at each grid point, evaluated in parallel. Failing points are kept
/// with a reason instead of aborting the curve.
std::vector<RmsPoint> rms_curve(const std::vector<double>& sigma_grid, const PrincipalCharacter& chi,
                                const TruncationPolicy& policy, PairingRule rule = PairingRule::literal);

struct PartialIdentity {
    Estimate lhs;  ///< sum_{k>=2} P(2k sigma) / k^v
    Estimate rhs;  ///< -sum_{n>=2} mu(n)/n^v sum_{k>=1} P(2kn sigma) / k^v
};

/// Both sides of the Mobius-inverted relation between the k >= 2 prime-zeta
/// tail and its full-series images. Requires 2 sigma > 1.
PartialIdentity mobius_partial_identity(double v, double sigma, const PrincipalCharacter& chi,
                                        const TruncationPolicy& policy);

}  // namespace lcorr
