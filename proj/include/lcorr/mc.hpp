#pragma once

#include "lcorr/arith.hpp"
#include "lcorr/correlation.hpp"
#include "lcorr/policy.hpp"
#include "lcorr/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lcorr {

enum class Sampler { iid_uniform, stratified };
const char* to_string(Sampler sampler) noexcept;
Sampler parse_sampler(const std::string& text);

/// t drawn from [t_start, t_start + t_span]. The stream is a pure function of
/// (seed, index), so any partition of the index range yields the same samples.
struct SamplingPlan {
    double t_start = 1e3;
    double t_span = 1e5;
    std::int64_t n_samples = 20'000;
    std::uint64_t seed = 0;
    Sampler sampler = Sampler::iid_uniform;

    /// Throws DomainError for t_span <= 0 or n_samples < 2.
    void validate() const;
};

/// SplitMix64 output for a counter value.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// The i-th sample point of the plan.
double sample_t(const SamplingPlan& plan, std::int64_t i) noexcept;

/// Which function is sampled: log|L(s, chi_0)| or the truncated Re P_chi0(s).
enum class LineKind { logL, reP };
const char* to_string(LineKind kind) noexcept;
LineKind parse_line_kind(const std::string& text);

/// Re P uses primes up to this bound; the cross moments of the truncated sum are
/// exact over those primes, so only the closed form carries the omitted tail.
inline constexpr std::int64_t kReP_PrimeLimit = 10'000;

/// Two lines sampled at the same t. vert: X at sigma_x + i alpha t, Y at
/// sigma_y + i beta t. diag: X at alpha (sigma_x + i t), Y at beta (sigma_y + i t).
struct LinePair {
    LineKind kind = LineKind::logL;
    CorrelationKind geometry = CorrelationKind::vert;
    Rational alpha{1};
    Rational beta{1};
    double sigma_x = 1.0;
    double sigma_y = 1.0;
    PrincipalCharacter chi{1};
};

/// Paired samples. Entries that failed to evaluate are dropped from both streams.
struct SampleStreams {
    std::vector<double> x, y;
    std::int64_t rejected = 0;  ///< samples whose evaluation threw
    std::int64_t flagged = 0;   ///< samples with |zeta| below the near-zero threshold
    std::vector<std::size_t> partition;  ///< worker block boundaries used for sampling
    std::string first_error;
};

/// Throws DomainError if a line leaves the evaluator's domain (Re s <= 0 for
/// logL, Re s <= 1 for reP, or a line through s = 1).
SampleStreams sample_line(const LinePair& pair, const SamplingPlan& plan, const TruncationPolicy& policy);

struct MomentEstimate {
    double raw_moment = 0.0;       ///< mean of X Y
    double centered_moment = 0.0;  ///< raw_moment - mean_x mean_y, diagnostic only
    double mean_x = 0.0, mean_y = 0.0;
    double std_x = 0.0, std_y = 0.0;  ///< sample standard deviations
    double std_error = 0.0;           ///< std(X Y) / sqrt(n)
    std::int64_t n_used = 0;
    std::int64_t rejected = 0;
    std::int64_t flagged = 0;
    bool degenerate = false;  ///< std_error == 0, e.g. constant streams
    std::vector<std::size_t> partition;
};

/// Raw product moment with compensated serial sums in index order. Throws
/// InsufficientDataError for fewer than two pairs.
MomentEstimate estimate_cov(const SampleStreams& streams);

struct CovarianceCheck {
    double closed_form = 0.0;
    double closed_error = 0.0;  ///< truncation bound of the closed form plus any sampling bias bound
    MomentEstimate estimate;
    double z_score = 0.0;   ///< |closed - raw| / std_error
    double mean_z_x = 0.0;  ///< |mean_x| / (std_x / sqrt(n))
    double mean_z_y = 0.0;
};

/// log|L| samples on the lines described by `spec` against the closed-form covariance.
CovarianceCheck verify_log_covariance(const CovarianceSpec& spec, const SamplingPlan& plan,
                                      const TruncationPolicy& policy, PairingRule rule = PairingRule::literal);

/// Re P samples on vertical lines sigma_x + i alpha t, sigma_y + i beta t against
/// (1/2) P(sigma_x + sigma_y) when alpha = beta and 0 otherwise.
CovarianceCheck verify_prime_sum_covariance(const Rational& alpha, const Rational& beta, double sigma_x,
                                            double sigma_y, const PrincipalCharacter& chi, const SamplingPlan& plan,
                                            const TruncationPolicy& policy);

inline constexpr int kCorrelationBatches = 50;

struct CorrelationEstimate {
    double value = 0.0;      ///< E{XY} / sqrt(E{X^2} E{Y^2}) over all samples
    double std_error = 0.0;  ///< batch-means standard error
    std::vector<double> batch_values;
    std::int64_t n_used = 0;
};

/// Empirical correlation of log|L| on the lines described by `spec`. Needs at least
/// 2 * kCorrelationBatches samples.
CorrelationEstimate estimate_corr(const CovarianceSpec& spec, const SamplingPlan& plan, const TruncationPolicy& policy);

struct CorrelationContrast {
    CorrelationEstimate first, second;
    double difference = 0.0;  ///< first - second
    double std_error = 0.0;   ///< from paired batch differences
    double z_score = 0.0;     ///< difference / std_error
};

/// Two correlations sampled at the same t, sharing line evaluations. Both
/// arguments must have the same geometry, sigma and character.
CorrelationContrast contrast_corr(const CovarianceSpec& first, const CovarianceSpec& second,
                                  const SamplingPlan& plan, const TruncationPolicy& policy);

}  // namespace lcorr
