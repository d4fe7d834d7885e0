#include "lcorr/errors.hpp"
#include "lcorr/special_fns.hpp"

#include <cmath>
#include <string>

namespace lcorr {

namespace {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t next_included_prime(std::int64_t after, const PrincipalCharacter& chi) {
    std::int64_t n = after + 1;
    while (!is_prime(n) || chi.excludes(n)) ++n;
    return n;
}

// log of zeta(x) with the Euler factors of the excluded primes removed.
double log_abs_zeta_without(double x, std::span<const std::int64_t> excluded, std::span<const std::int64_t> extra,
                            const TruncationPolicy& policy) {
    CompensatedSum sum;
    sum += log_abs_zeta_real(x, policy);
    for (std::int64_t p : excluded) {
        double term = std::pow(static_cast<double>(p), -x);
        if (term == 0.0) break;
        sum += std::log1p(-term);
    }
    for (std::int64_t p : extra) sum += std::log1p(-std::pow(static_cast<double>(p), -x));
    return sum.value();
}

// Primes of chi above `bound`, which a table up to `bound` does not cover.
std::vector<std::int64_t> factors_above(const PrincipalCharacter& chi, std::int64_t bound) {
    std::vector<std::int64_t> out;
    for (std::int64_t p : chi.prime_factors())
        if (p > bound) out.push_back(p);
    return out;
}

void require_above_one(double sigma, const char* what) {
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError(std::string(what) + " needs finite sigma > 1, got " + std::to_string(sigma));
}

}  // namespace

double integer_tail_majorant(double y, double q) noexcept {
    return std::pow(q, -y) * (1.0 + q / (y - 1.0));
}

Estimate mobius_prime_sum(double s, std::span<const std::int64_t> excluded, std::span<const std::int64_t> extra,
                          std::int64_t first_included, const TruncationPolicy& policy) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("prime sum needs finite s > 0");
    const double q = static_cast<double>(first_included);
    const TruncationPolicy inner = policy.with_tol(policy.abs_tol * 1e-3);
    CompensatedSum sum;
    for (std::int64_t n = 1; n <= policy.term_limit; ++n) {
        double x = static_cast<double>(n) * s;
        if (std::abs(x - 1.0) < policy.singular_radius)
            throw SingularityError("prime sum at s = " + std::to_string(s) + " meets the pole of zeta at n = " +
                                   std::to_string(n));
        if (int mu = mobius(n); mu != 0)
            sum += mu / static_cast<double>(n) * log_abs_zeta_without(x, excluded, extra, inner);
        // log|zeta_E(y)| <= sum_{m >= q} m^{-y} for y > 1, geometric in n from here on.
        double y = static_cast<double>(n + 1) * s;
        if (y > 1.0) {
            double tail = (1.0 + q / (y - 1.0)) / static_cast<double>(n + 1) * std::pow(q, -y) /
                          (1.0 - std::pow(q, -s));
            if (tail <= policy.abs_tol) return {sum.value(), tail, n};
        }
    }
    throw PrecisionError("Mobius-inverted prime sum at s = " + std::to_string(s) + " needs more than " +
                         std::to_string(policy.term_limit) + " terms");
}

Estimate prime_zeta_series(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    require_above_one(sigma, "prime_zeta_series");
    policy.validate();
    auto table = shared_prime_table(policy.prime_limit);
    CompensatedSum sum;
    std::int64_t count = 0;
    for (std::int64_t p : table->primes) {
        if (chi.excludes(p)) continue;
        double term = std::pow(static_cast<double>(p), -sigma);
        sum += term;
        ++count;
        // sum_{p' > p} p'^{-sigma} <= int_p^inf x^{-sigma} dx.
        double tail = static_cast<double>(p) * term / (sigma - 1.0);
        if (tail <= policy.abs_tol) return {sum.value(), tail, count};
    }
    auto extra = factors_above(chi, policy.prime_limit);
    Estimate rest = mobius_prime_sum(sigma, table->primes, extra, next_included_prime(policy.prime_limit, chi),
                                     policy.with_tol(policy.abs_tol / 2.0));
    sum += rest.value;
    return {sum.value(), rest.error_bound, count + rest.terms};
}

Estimate prime_zeta_continued(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("prime_zeta_continued needs finite sigma > 0");
    policy.validate();
    return mobius_prime_sum(sigma, chi.prime_factors(), {}, smallest_excluded_prime(chi), policy);
}

Estimate prime_zeta(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    return sigma > 1.0 ? prime_zeta_series(sigma, chi, policy) : prime_zeta_continued(sigma, chi, policy);
}

Estimate li2_prime_sum(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    require_above_one(sigma, "li2_prime_sum");
    policy.validate();
    auto table = shared_prime_table(policy.prime_limit);
    CompensatedSum sum;
    std::int64_t count = 0;
    for (std::int64_t p : table->primes) {
        if (chi.excludes(p)) continue;
        double y = std::pow(static_cast<double>(p), -sigma);
        double li = li2_small(y);
        sum += li;
        ++count;
        // Li_2(y)/y grows with y, so later terms are at most (Li_2(y)/y) p'^{-sigma}.
        double tail = (li / y) * static_cast<double>(p) * y / (sigma - 1.0);
        if (tail <= policy.abs_tol) return {sum.value(), tail, count};
    }
    // Remaining primes: sum_{p > P} Li_2(p^{-sigma}) = sum_k R(k sigma) / k^2,
    // R(y) = sum_{p > P} p^{-y} <= P^{1-y} / (y-1).
    const double P = static_cast<double>(policy.prime_limit);
    auto extra = factors_above(chi, policy.prime_limit);
    std::int64_t q = next_included_prime(policy.prime_limit, chi);
    double bound = 0.0;
    for (std::int64_t k = 1; k <= policy.term_limit; ++k) {
        double kd = static_cast<double>(k);
        Estimate r = mobius_prime_sum(kd * sigma, table->primes, extra, q, policy.with_tol(policy.abs_tol / 4.0));
        sum += r.value / (kd * kd);
        bound += r.error_bound / (kd * kd);
        count += r.terms;
        double y = (kd + 1.0) * sigma;
        double k_tail = std::pow(P, 1.0 - y) / ((y - 1.0) * (kd + 1.0) * (kd + 1.0) * (1.0 - std::pow(P, -sigma)));
        if (k_tail <= policy.abs_tol / 4.0) return {sum.value(), bound + k_tail, count};
    }
    throw PrecisionError("li2_prime_sum remainder needs more than term_limit orders");
}

}  // namespace lcorr
