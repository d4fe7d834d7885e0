#pragma once

#include "lcorr/arith.hpp"
#include "lcorr/policy.hpp"
#include "lcorr/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lcorr {

/// diag: log|L| at alpha(sigma+it) against beta(sigma+it).
/// vert: log|L| at sigma+i alpha t against sigma+i beta t.
enum class CorrelationKind { diag, vert };

const char* to_string(CorrelationKind kind) noexcept;
/// "diag" or "vert"; throws ParseError otherwise.
CorrelationKind parse_kind(const std::string& text);

/// How frequencies of a dissonant pair are matched.
///
/// `literal` uses coefficient 1/(2 alpha beta) with exponent base built from
/// alpha beta (diag) or alpha + beta (vert) for every dissonant pair. It is
/// exact when alpha and beta are coprime integers.
/// `reduced` writes alpha/beta = a/b in lowest terms and alpha = g a, and uses
/// 1/(2ab) with base 2abg sigma (diag) or (a+b) sigma (vert), which is exact
/// for all positive rationals. Both rules agree on resonant pairs.
enum class PairingRule { literal, reduced };

const char* to_string(PairingRule rule) noexcept;
PairingRule parse_pairing(const std::string& text);

struct CovarianceSpec {
    CorrelationKind kind = CorrelationKind::diag;
    Rational alpha{1};
    Rational beta{1};
    double sigma = 1.0;
    PrincipalCharacter chi{};
};

/// True when beta | alpha, i.e. alpha / beta is a positive integer.
bool is_resonant(const Rational& alpha, const Rational& beta);

/// R = coefficient * S(base) with S(x) = sum_{p not dividing M} Li_2(p^{-x})
/// = sum_{k>=1} P_chi0(k x) / k^2.
struct CovarianceTerm {
    double coefficient = 0.0;
    double base = 0.0;
    bool resonant = false;
};

/// Requires alpha >= beta > 0.
CovarianceTerm covariance_term(CorrelationKind kind, const Rational& alpha, const Rational& beta, double sigma,
                               PairingRule rule = PairingRule::literal);

enum class Representation { li2_prime_sum, k_series };

const char* to_string(Representation rep) noexcept;

struct PairSum {
    Estimate estimate;
    Representation representation = Representation::li2_prime_sum;
};

/// S(x) = sum_k P_chi0(k x) / k^2. For x > 1 the prime sum of Li_2(p^{-x}) is
/// used; otherwise the k-series with continued prime zeta values, which is
/// singular where n k x = 1 for some n, k >= 1.
PairSum pair_sum(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy);

/// Forces one representation. The Li_2 form needs x > 1.
PairSum pair_sum(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy, Representation rep);

struct CovarianceResult {
    double value = 0.0;
    double error_bound = 0.0;
    CovarianceTerm term;
    Representation representation = Representation::li2_prime_sum;
};

/// Closed-form covariance; requires alpha >= beta and a matching spec.kind.
CovarianceResult cov_diag(const CovarianceSpec& spec, const TruncationPolicy& policy,
                          PairingRule rule = PairingRule::literal);
CovarianceResult cov_vert(const CovarianceSpec& spec, const TruncationPolicy& policy,
                          PairingRule rule = PairingRule::literal);
/// Dispatches on spec.kind.
CovarianceResult covariance(const CovarianceSpec& spec, const TruncationPolicy& policy,
                            PairingRule rule = PairingRule::literal);

struct CorrelationResult {
    double value = 0.0;
    double error_bound = 0.0;
    bool resonant = false;
    Representation representation = Representation::li2_prime_sum;  ///< of the cross term
};

/// rho = R(alpha,beta) / sqrt(R(alpha,alpha) R(beta,beta)); for vert both
/// self-covariances equal R(1,1). Arguments with alpha < beta are swapped.
CorrelationResult corr(const CovarianceSpec& spec, const TruncationPolicy& policy,
                       PairingRule rule = PairingRule::literal);

/// Leading-order decay with p the least prime not dividing M:
/// diag resonant (beta/alpha) p^{(beta-alpha) sigma},
/// diag dissonant (1/(alpha beta)) p^{(beta+alpha-2 alpha beta) sigma},
/// vert resonant (beta/alpha) p^{(1-alpha/beta) sigma},
/// vert dissonant (1/(alpha beta)) p^{(2-beta-alpha) sigma}.
double corr_asymptotic(const CovarianceSpec& spec);

/// E{Re P(s1) Re P(s2)} for the prime-zeta pair on the same geometry as `kind`:
/// vert compares sigma + i alpha t with sigma2 + i beta t and gives
/// P(sigma + sigma2)/2 when alpha = beta; diag compares alpha(sigma + it) with
/// beta(sigma2 + it) and gives P(alpha (sigma + sigma2))/2 when alpha = beta.
/// Zero otherwise.
Estimate primeL_cov_closed(CorrelationKind kind, const Rational& alpha, const Rational& beta, double sigma,
                           double sigma2, const PrincipalCharacter& chi, const TruncationPolicy& policy);

struct CorrelationTable {
    CorrelationKind kind = CorrelationKind::diag;
    double sigma = 0.0;
    std::int64_t modulus = 1;
    std::vector<Rational> alphas;  ///< row labels
    std::vector<Rational> betas;   ///< column labels
    /// values[i][j] = rho(alphas[i], betas[j]); empty when the cell hit a singular point.
    std::vector<std::vector<std::optional<double>>> values;
    std::vector<std::vector<bool>> divis_mask;       ///< larger label divisible by the smaller
    std::vector<std::vector<std::string>> absent_reason;

    std::size_t absent_count() const;
};

/// Every cell of the alphas x betas grid. Cells at singular points are left
/// empty with a reason; any other failure throws TableError naming the cell.
CorrelationTable build_table(CorrelationKind kind, const std::vector<Rational>& alphas,
                             const std::vector<Rational>& betas, double sigma, const PrincipalCharacter& chi,
                             const TruncationPolicy& policy, PairingRule rule = PairingRule::literal);

/// Round half to even at `digits` decimals, for display.
double round_half_even(double value, int digits);

}  // namespace lcorr
