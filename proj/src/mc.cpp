#include "lcorr/mc.hpp"

#include "lcorr/errors.hpp"
#include "lcorr/parallel.hpp"
#include "lcorr/special_fns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace lcorr {

const char* to_string(Sampler sampler) noexcept {
    return sampler == Sampler::iid_uniform ? "iid_uniform" : "stratified";
}

Sampler parse_sampler(const std::string& text) {
    if (text == "iid_uniform" || text == "iid") return Sampler::iid_uniform;
    if (text == "stratified") return Sampler::stratified;
    throw ParseError("unknown sampler '" + text + "' (expected iid_uniform or stratified)");
}

const char* to_string(LineKind kind) noexcept { return kind == LineKind::logL ? "logL" : "reP"; }

LineKind parse_line_kind(const std::string& text) {
    if (text == "logL") return LineKind::logL;
    if (text == "reP") return LineKind::reP;
    throw ParseError("unknown line kind '" + text + "' (expected logL or reP)");
}

void SamplingPlan::validate() const {
    if (!(t_span > 0.0) || !std::isfinite(t_span)) throw DomainError("sampling span must be positive");
    if (!std::isfinite(t_start)) throw DomainError("sampling start must be finite");
    if (n_samples < 2) throw DomainError("a sampling plan needs at least two samples");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double sample_t(const SamplingPlan& plan, std::int64_t i) noexcept {
    // Counter i is mixed with the seed through two rounds so nearby seeds give unrelated streams.
    std::uint64_t bits = splitmix64(splitmix64(plan.seed) ^ static_cast<std::uint64_t>(i));
    double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    if (plan.sampler == Sampler::stratified) u = (static_cast<double>(i) + u) / static_cast<double>(plan.n_samples);
    return plan.t_start + plan.t_span * u;
}

namespace {

// Points sigma + i scale t along one line.
struct Line {
    LineKind kind;
    double sigma;
    double scale;
    auto key() const { return std::tuple(static_cast<int>(kind), sigma, scale); }
};

Line x_line(const LinePair& pair) {
    double a = pair.alpha.to_double();
    return {pair.kind, pair.geometry == CorrelationKind::diag ? a * pair.sigma_x : pair.sigma_x, a};
}

Line y_line(const LinePair& pair) {
    double b = pair.beta.to_double();
    return {pair.kind, pair.geometry == CorrelationKind::diag ? b * pair.sigma_y : pair.sigma_y, b};
}

enum : std::uint8_t { kOk = 0, kFlagged = 1, kRejected = 2 };

struct Stream {
    std::vector<double> values;
    std::vector<std::uint8_t> status;
    std::string first_error;
};

Stream evaluate_line(const Line& line, const PrincipalCharacter& chi, const SamplingPlan& plan,
                     const TruncationPolicy& policy) {
    if (!(line.scale > 0.0)) throw DomainError("line scale must be positive");
    const std::size_t n = static_cast<std::size_t>(plan.n_samples);
    Stream out;
    out.values.assign(n, 0.0);
    out.status.assign(n, kOk);
    std::mutex error_lock;
    auto record = [&](std::size_t i, const Error& e) {
        out.status[i] = kRejected;
        std::lock_guard<std::mutex> guard(error_lock);
        if (out.first_error.empty()) out.first_error = e.what();
    };

    if (line.kind == LineKind::reP) {
        if (!(line.sigma > 1.0))
            throw DomainError("Re P sampling needs Re s > 1, got " + std::to_string(line.sigma));
        std::vector<double> weight, log_p;
        for (std::int64_t p : shared_prime_table(kReP_PrimeLimit)->primes) {
            if (chi.excludes(p)) continue;
            log_p.push_back(std::log(static_cast<double>(p)));
            weight.push_back(std::exp(-line.sigma * log_p.back()));
        }
        parallel_for(n, [&](std::size_t i) {
            double t = line.scale * sample_t(plan, static_cast<std::int64_t>(i));
            CompensatedSum sum;
            for (std::size_t j = 0; j < weight.size(); ++j) sum += weight[j] * std::cos(t * log_p[j]);
            out.values[i] = sum.value();
        });
        return out;
    }

    if (!(line.sigma > 0.0)) throw DomainError("log|L| sampling needs Re s > 0");
    double t_max = line.scale * std::fmax(std::fabs(plan.t_start), std::fabs(plan.t_start + plan.t_span));
    ZetaLine zeta(line.sigma, t_max, policy);
    parallel_for(n, [&](std::size_t i) {
        double t = line.scale * sample_t(plan, static_cast<std::int64_t>(i));
        try {
            LineValue v = log_abs_L_line(zeta, t, chi);
            out.values[i] = v.value;
            if (v.near_zero) out.status[i] = kFlagged;
        } catch (const Error& e) {
            record(i, e);
        }
    });
    return out;
}

// Evaluates each distinct line once.
class LineCache {
public:
    LineCache(const PrincipalCharacter& chi, const SamplingPlan& plan, const TruncationPolicy& policy)
        : chi_(chi), plan_(plan), policy_(policy) {}

    const Stream& get(const Line& line) {
        auto it = cache_.find(line.key());
        if (it == cache_.end()) it = cache_.emplace(line.key(), evaluate_line(line, chi_, plan_, policy_)).first;
        return it->second;
    }

private:
    const PrincipalCharacter& chi_;
    const SamplingPlan& plan_;
    const TruncationPolicy& policy_;
    std::map<std::tuple<int, double, double>, Stream> cache_;
};

SampleStreams pair_streams(const Stream& sx, const Stream& sy, std::size_t n) {
    SampleStreams out;
    out.x.reserve(n);
    out.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t a = sx.status[i], b = sy.status[i];
        if (a == kRejected || b == kRejected) {
            ++out.rejected;
            continue;
        }
        if (a == kFlagged || b == kFlagged) ++out.flagged;
        out.x.push_back(sx.values[i]);
        out.y.push_back(sy.values[i]);
    }
    out.partition = partition_bounds(n, thread_count());
    out.first_error = !sx.first_error.empty() ? sx.first_error : sy.first_error;
    return out;
}

LinePair log_pair(const CovarianceSpec& spec) {
    return {LineKind::logL, spec.kind, spec.alpha, spec.beta, spec.sigma, spec.sigma, spec.chi};
}

double mean_z(double mean, double sd, std::int64_t n) {
    double se = sd / std::sqrt(static_cast<double>(n));
    return se > 0.0 ? std::fabs(mean) / se : (mean == 0.0 ? 0.0 : INFINITY);
}

CovarianceCheck finish_check(double closed, double closed_error, const MomentEstimate& m) {
    CovarianceCheck out;
    out.closed_form = closed;
    out.closed_error = closed_error;
    out.estimate = m;
    double diff = std::fabs(closed - m.raw_moment);
    out.z_score = m.std_error > 0.0 ? diff / m.std_error : (diff == 0.0 ? 0.0 : INFINITY);
    out.mean_z_x = mean_z(m.mean_x, m.std_x, m.n_used);
    out.mean_z_y = mean_z(m.mean_y, m.std_y, m.n_used);
    return out;
}

// E{XY} / sqrt(E{X^2} E{Y^2}) over [begin, end).
double ratio_estimate(const std::vector<double>& x, const std::vector<double>& y, std::size_t begin, std::size_t end) {
    CompensatedSum xy, xx, yy;
    for (std::size_t i = begin; i < end; ++i) {
        xy += x[i] * y[i];
        xx += x[i] * x[i];
        yy += y[i] * y[i];
    }
    double denom = std::sqrt(xx.value() * yy.value());
    if (!(denom > 0.0)) throw DegenerateError("empirical correlation has a zero second moment");
    return xy.value() / denom;
}

CorrelationEstimate correlation_from(const SampleStreams& s) {
    const std::size_t n = s.x.size();
    if (n < 2 * static_cast<std::size_t>(kCorrelationBatches))
        throw InsufficientDataError("empirical correlation needs at least " +
                                    std::to_string(2 * kCorrelationBatches) + " usable samples");
    CorrelationEstimate out;
    out.n_used = static_cast<std::int64_t>(n);
    out.value = ratio_estimate(s.x, s.y, 0, n);
    auto bounds = partition_bounds(n, kCorrelationBatches);
    CompensatedSum sum, sum_sq;
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        double r = ratio_estimate(s.x, s.y, bounds[b], bounds[b + 1]);
        out.batch_values.push_back(r);
        sum += r;
    }
    double mean = sum.value() / kCorrelationBatches;
    for (double r : out.batch_values) sum_sq += (r - mean) * (r - mean);
    out.std_error = std::sqrt(sum_sq.value() / (kCorrelationBatches - 1) / kCorrelationBatches);
    return out;
}

}  // namespace

SampleStreams sample_line(const LinePair& pair, const SamplingPlan& plan, const TruncationPolicy& policy) {
    plan.validate();
    policy.validate();
    LineCache cache(pair.chi, plan, policy);
    const Stream& sx = cache.get(x_line(pair));
    const Stream& sy = cache.get(y_line(pair));
    return pair_streams(sx, sy, static_cast<std::size_t>(plan.n_samples));
}

MomentEstimate estimate_cov(const SampleStreams& streams) {
    if (streams.x.size() != streams.y.size()) throw PreconditionError("paired streams differ in length");
    const std::size_t n = streams.x.size();
    if (n < 2) throw InsufficientDataError("moment estimate needs at least two usable samples, got " + std::to_string(n));
    const double nd = static_cast<double>(n);
    CompensatedSum sx, sy, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        sx += streams.x[i];
        sy += streams.y[i];
        sxy += streams.x[i] * streams.y[i];
    }
    MomentEstimate m;
    m.n_used = static_cast<std::int64_t>(n);
    m.rejected = streams.rejected;
    m.flagged = streams.flagged;
    m.partition = streams.partition;
    m.mean_x = sx.value() / nd;
    m.mean_y = sy.value() / nd;
    m.raw_moment = sxy.value() / nd;
    m.centered_moment = m.raw_moment - m.mean_x * m.mean_y;
    CompensatedSum vx, vy, vxy;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = streams.x[i] - m.mean_x;
        double dy = streams.y[i] - m.mean_y;
        double dxy = streams.x[i] * streams.y[i] - m.raw_moment;
        vx += dx * dx;
        vy += dy * dy;
        vxy += dxy * dxy;
    }
    m.std_x = std::sqrt(vx.value() / (nd - 1.0));
    m.std_y = std::sqrt(vy.value() / (nd - 1.0));
    m.std_error = std::sqrt(vxy.value() / (nd - 1.0) / nd);
    m.degenerate = m.std_error == 0.0;
    return m;
}

CovarianceCheck verify_log_covariance(const CovarianceSpec& spec, const SamplingPlan& plan,
                                      const TruncationPolicy& policy, PairingRule rule) {
    CovarianceSpec ordered = spec;
    if (ordered.alpha < ordered.beta) std::swap(ordered.alpha, ordered.beta);
    CovarianceResult closed = covariance(ordered, policy, rule);
    MomentEstimate m = estimate_cov(sample_line(log_pair(spec), plan, policy));
    return finish_check(closed.value, closed.error_bound, m);
}

CovarianceCheck verify_prime_sum_covariance(const Rational& alpha, const Rational& beta, double sigma_x,
                                            double sigma_y, const PrincipalCharacter& chi, const SamplingPlan& plan,
                                            const TruncationPolicy& policy) {
    Estimate closed = primeL_cov_closed(CorrelationKind::vert, alpha, beta, sigma_x, sigma_y, chi, policy);
    LinePair pair{LineKind::reP, CorrelationKind::vert, alpha, beta, sigma_x, sigma_y, chi};
    MomentEstimate m = estimate_cov(sample_line(pair, plan, policy));
    // Primes above the sampling cutoff are in the closed form but not in the samples.
    double s = sigma_x + sigma_y;
    double cutoff = static_cast<double>(kReP_PrimeLimit);
    double bias = alpha == beta ? 0.5 * std::pow(cutoff, 1.0 - s) / (s - 1.0) : 0.0;
    return finish_check(closed.value, closed.error_bound + bias, m);
}

CorrelationEstimate estimate_corr(const CovarianceSpec& spec, const SamplingPlan& plan, const TruncationPolicy& policy) {
    return correlation_from(sample_line(log_pair(spec), plan, policy));
}

CorrelationContrast contrast_corr(const CovarianceSpec& first, const CovarianceSpec& second, const SamplingPlan& plan,
                                  const TruncationPolicy& policy) {
    if (first.kind != second.kind || first.sigma != second.sigma || !(first.chi == second.chi))
        throw PreconditionError("contrasted correlations must share geometry, sigma and character");
    plan.validate();
    policy.validate();
    LineCache cache(first.chi, plan, policy);
    const std::size_t n = static_cast<std::size_t>(plan.n_samples);
    LinePair a = log_pair(first), b = log_pair(second);
    const Stream& ax = cache.get(x_line(a));
    const Stream& ay = cache.get(y_line(a));
    const Stream& bx = cache.get(x_line(b));
    const Stream& by = cache.get(y_line(b));
    // Keep only t where all four lines evaluated, so batches line up.
    Stream ax2 = ax, bx2 = bx;
    for (std::size_t i = 0; i < n; ++i)
        if (ay.status[i] == kRejected || bx.status[i] == kRejected || by.status[i] == kRejected) ax2.status[i] = kRejected;
    for (std::size_t i = 0; i < n; ++i)
        if (ax2.status[i] == kRejected) bx2.status[i] = kRejected;

    CorrelationContrast out;
    out.first = correlation_from(pair_streams(ax2, ay, n));
    out.second = correlation_from(pair_streams(bx2, by, n));
    out.difference = out.first.value - out.second.value;
    CompensatedSum sum, sum_sq;
    std::vector<double> diffs;
    for (int k = 0; k < kCorrelationBatches; ++k) {
        diffs.push_back(out.first.batch_values[k] - out.second.batch_values[k]);
        sum += diffs.back();
    }
    double mean = sum.value() / kCorrelationBatches;
    for (double d : diffs) sum_sq += (d - mean) * (d - mean);
    out.std_error = std::sqrt(sum_sq.value() / (kCorrelationBatches - 1) / kCorrelationBatches);
    out.z_score = out.std_error > 0.0 ? out.difference / out.std_error : (out.difference > 0 ? INFINITY : 0.0);
    return out;
}

}  // namespace lcorr
