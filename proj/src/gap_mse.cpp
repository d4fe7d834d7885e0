#include "lcorr/gap_mse.hpp"

#include "lcorr/correlation.hpp"
#include "lcorr/errors.hpp"
#include "lcorr/parallel.hpp"
#include "lcorr/special_fns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace lcorr {

namespace {

void require_quarter(double sigma, const char* what) {
    if (!(sigma > 0.25) || !std::isfinite(sigma))
        throw DomainError(std::string(what) + " needs finite sigma > 1/4, got " + std::to_string(sigma));
}

// Bound on sum_{k>K} k^{-v} P(k y0) using P(y) <= q^{-y} (1 + q/(y-1)) and a
// term ratio of at most q^{-y0} ((K+2)/(K+1))^{-v}. Infinite if not geometric.
double weighted_k_tail(double y0, std::int64_t K, double q, double v) {
    double k1 = static_cast<double>(K + 1);
    double y = k1 * y0;
    if (y <= 1.0) return INFINITY;
    double first = std::pow(k1, -v) * integer_tail_majorant(y, q);
    double ratio = std::pow(q, -y0) * std::fmax(1.0, std::pow((k1 + 1.0) / k1, -v));
    return ratio < 1.0 ? first / (1.0 - ratio) : INFINITY;
}

// sum_{k >= k_min} P_chi0(k y0) / k^v with k y0 > 1 throughout.
Estimate weighted_prime_zeta_series(double y0, double v, std::int64_t k_min, const PrincipalCharacter& chi,
                                    const TruncationPolicy& policy) {
    const double q = static_cast<double>(smallest_excluded_prime(chi));
    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t k = k_min; k <= policy.term_limit; ++k) {
        double kd = static_cast<double>(k);
        double weight = std::pow(kd, -v);
        double sub = policy.abs_tol / (4.0 * kd * kd * std::fmax(1.0, weight));
        Estimate p = prime_zeta_series(kd * y0, chi, policy.with_tol(sub));
        sum += weight * p.value;
        bound += weight * p.error_bound;
        double tail = weighted_k_tail(y0, k, q, v);
        if (tail <= policy.abs_tol / 2.0) return {sum.value(), bound + tail, k - k_min + 1};
    }
    throw PrecisionError("weighted prime-zeta series at y = " + std::to_string(y0) + " exceeds term_limit");
}

// Upper bound for R(n, n, sigma) = S(2 n sigma) / 2.
double self_covariance_majorant(double n, double sigma, double q) {
    double y = 2.0 * n * sigma;
    double z = std::pow(q, -y);
    double c = z > 0.0 ? li2_small(z) / z : 1.0;
    return 0.5 * c * (z + q * z / (y - 1.0));
}

// Bound on sum_k k^{-v} P(k y0): P(k y0) <= B(y0) q^{-(k-1) y0} and k^{-v} <= k^{|v|}.
double weighted_series_majorant(double y0, double v, double q) {
    double r = std::pow(q, -y0);
    double a = std::fabs(v);
    double sum = 0.0;
    for (int k = 1; k < 100'000; ++k) {
        double term = std::pow(k, a) * std::pow(r, k - 1);
        sum += term;
        double ratio = std::pow((k + 1.0) / k, a) * r;
        if (ratio < 0.9) {
            double next = std::pow(k + 1.0, a) * std::pow(r, k);
            if (next <= 1e-3 * sum) return integer_tail_majorant(y0, q) * (sum + next / (1.0 - ratio));
        }
    }
    return INFINITY;
}

}  // namespace

Estimate mse_simple(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    require_quarter(sigma, "mse_simple");
    policy.validate();
    Estimate s = weighted_prime_zeta_series(2.0 * sigma, 2.0, 2, chi, policy.with_tol(2.0 * policy.abs_tol));
    return {0.5 * s.value, 0.5 * s.error_bound, s.terms};
}

namespace {

constexpr double kZeta2Minus1 = std::numbers::pi * std::numbers::pi / 6.0 - 1.0;

// S(x) = sum_p Li_2(p^{-x}) memoized by base, with R(n, n) = S(2 n sigma) / 2.
class PairSumCache {
public:
    PairSumCache(const PrincipalCharacter& chi, const TruncationPolicy& policy) : chi_(chi), policy_(policy) {}

    // S(base) accurate to abs_tol / (40 max(1, weight)).
    const Estimate& get(double base, double weight) {
        double want = policy_.abs_tol / (40.0 * std::fmax(1.0, weight));
        auto it = cache_.find(base);
        if (it != cache_.end() && it->second.error_bound <= want) return it->second;
        Estimate e = pair_sum(base, chi_, policy_.with_tol(want)).estimate;
        return cache_.insert_or_assign(base, e).first->second;
    }

private:
    const PrincipalCharacter& chi_;
    TruncationPolicy policy_;
    std::map<double, Estimate> cache_;
};

// Stops an outer n-sum once envelope(n+1) summed with ratio q^{-2 sigma} (n+2)/(n+1) is below tol/2.
template <class Envelope>
std::optional<double> outer_tail(std::int64_t n, double sigma, double q, double tol, Envelope envelope) {
    double nd = static_cast<double>(n);
    double ratio = std::pow(q, -2.0 * sigma) * (nd + 2.0) / (nd + 1.0);
    if (ratio >= 1.0) return std::nullopt;
    double tail = envelope(nd + 1.0) / (1.0 - ratio);
    if (tail > tol / 2.0) return std::nullopt;
    return tail;
}

}  // namespace

Estimate mobius_self_sum(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy,
                         const std::function<double(std::int64_t)>& coefficient, double max_coefficient) {
    require_quarter(sigma, "self-covariance sum");
    policy.validate();
    const double q = static_cast<double>(smallest_excluded_prime(chi));
    PairSumCache S(chi, policy);
    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t n = 2; n <= policy.term_limit; ++n) {
        double nd = static_cast<double>(n);
        double c = coefficient(n);
        if (c != 0.0) {
            const auto& s = S.get(2.0 * nd * sigma, std::fabs(c));
            sum += c * 0.5 * s.value / (nd * nd);
            bound += std::fabs(c) * 0.5 * s.error_bound / (nd * nd);
        }
        auto tail = outer_tail(n, sigma, q, policy.abs_tol, [&](double m) {
            return max_coefficient * self_covariance_majorant(m, sigma, q) / (m * m);
        });
        if (tail) return {sum.value(), bound + *tail, n - 1};
    }
    throw PrecisionError("self-covariance sum exceeds term_limit");
}

Estimate non_divisor_cross_sum(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy,
                               PairingRule rule) {
    require_quarter(sigma, "non-divisor sum");
    policy.validate();
    const double q = static_cast<double>(smallest_excluded_prime(chi));
    PairSumCache S(chi, policy);
    // The literal cross term is R(nm, nm); the reduced one is nm R(n, m) with the exact pairing.
    // Both are w S(base) with w = nm * coefficient; the reduced weight g^2/2 has g <= m/2 and base >= 4 n sigma.
    auto envelope = [&](double n) {
        double inner = rule == PairingRule::literal ? kZeta2Minus1 : std::fmax(kZeta2Minus1, n / 4.0);
        return inner * self_covariance_majorant(2.0 * n, sigma, q) / (n * n);
    };
    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t n = 2; n <= policy.term_limit; ++n) {
        int mu_n = mobius(n);
        double nd = static_cast<double>(n);
        if (mu_n != 0) {
            double term = 0.0, term_err = 0.0;
            for (std::int64_t m = 2; m < n; ++m) {
                if (n % m == 0) continue;
                int mu_m = mobius(m);
                if (mu_m == 0) continue;
                double md = static_cast<double>(m);
                CovarianceTerm ct = covariance_term(CorrelationKind::diag, Rational(n), Rational(m), sigma, rule);
                double weight = nd * md * ct.coefficient;
                const auto& s = S.get(ct.base, weight);
                term += mu_m / (md * md) * weight * s.value;
                term_err += weight * s.error_bound / (md * md);
            }
            sum += mu_n / (nd * nd) * term;
            bound += term_err / (nd * nd);
        }
        auto tail = outer_tail(n, sigma, q, policy.abs_tol, envelope);
        if (tail) return {sum.value(), bound + *tail, n - 1};
    }
    throw PrecisionError("non-divisor sum exceeds term_limit");
}

Estimate mse_expanded(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy, PairingRule rule) {
    require_quarter(sigma, "mse_expanded");
    policy.validate();
    // -(mu(n) + 2) mu(n) is at most 3 in magnitude.
    Estimate self = mobius_self_sum(
        sigma, chi, policy.with_tol(policy.abs_tol / 2.0),
        [](std::int64_t n) {
            int mu = mobius(n);
            return -static_cast<double>((mu + 2) * mu);
        },
        3.0);
    Estimate cross = non_divisor_cross_sum(sigma, chi, policy.with_tol(policy.abs_tol / 4.0), rule);
    return {self.value + 2.0 * cross.value, self.error_bound + 2.0 * cross.error_bound,
            std::max(self.terms, cross.terms)};
}

GapMseResult gap_mse(double sigma, const PrincipalCharacter& chi, const TruncationPolicy& policy, PairingRule rule) {
    GapMseResult out;
    out.sigma = sigma;
    out.simple = mse_simple(sigma, chi, policy);
    out.expanded = mse_expanded(sigma, chi, policy, rule);
    out.rms = std::sqrt(std::fmax(0.0, out.simple.value));
    return out;
}

std::vector<RmsPoint> rms_curve(const std::vector<double>& sigma_grid, const PrincipalCharacter& chi,
                                const TruncationPolicy& policy, PairingRule rule) {
    std::vector<RmsPoint> out(sigma_grid.size());
    parallel_for(sigma_grid.size(), [&](std::size_t i) {
        out[i].sigma = sigma_grid[i];
        try {
            out[i].result = gap_mse(sigma_grid[i], chi, policy, rule);
        } catch (const Error& e) {
            out[i].reason = e.what();
        }
    });
    return out;
}

PartialIdentity mobius_partial_identity(double v, double sigma, const PrincipalCharacter& chi,
                                        const TruncationPolicy& policy) {
    if (!(2.0 * sigma > 1.0) || !std::isfinite(sigma)) throw DomainError("Mobius partial identity needs 2 sigma > 1");
    if (!std::isfinite(v)) throw DomainError("order v must be finite");
    policy.validate();
    const double q = static_cast<double>(smallest_excluded_prime(chi));
    const double tol = policy.abs_tol;

    PartialIdentity out;
    out.lhs = weighted_prime_zeta_series(2.0 * sigma, v, 2, chi, policy);

    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t n = 2; n <= policy.term_limit; ++n) {
        double nd = static_cast<double>(n);
        int mu = mobius(n);
        if (mu != 0) {
            double weight = std::pow(nd, -v);
            double sub = tol / (4.0 * nd * nd * std::fmax(1.0, weight));
            Estimate t = weighted_prime_zeta_series(2.0 * nd * sigma, v, 1, chi, policy.with_tol(sub));
            sum += -mu * weight * t.value;
            bound += weight * t.error_bound;
        }
        // Terms n^{-v} U(2 n sigma) shrink by at least q^{-2 sigma} ((N+2)/(N+1))^{-v}.
        double n1 = nd + 1.0;
        double next = std::pow(n1, -v) * weighted_series_majorant(2.0 * n1 * sigma, v, q);
        double ratio = std::pow(q, -2.0 * sigma) * std::fmax(1.0, std::pow((n1 + 1.0) / n1, -v));
        if (ratio < 1.0) {
            double tail = next / (1.0 - ratio);
            if (tail <= tol / 2.0) {
                out.rhs = {sum.value(), bound + tail, n - 1};
                return out;
            }
        }
    }
    throw PrecisionError("Mobius partial identity outer sum exceeds term_limit");
}

}  // namespace lcorr
