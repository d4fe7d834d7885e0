#include "lcorr/identities.hpp"

#include "lcorr/errors.hpp"
#include "lcorr/gap_mse.hpp"
#include "lcorr/parallel.hpp"
#include "lcorr/special_fns.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <charconv>
#include <cmath>
#include <numeric>

namespace lcorr {

IdentityReport make_report(std::string name, std::string parameters, double lhs, double rhs, double tol) {
    IdentityReport r;
    r.name = std::move(name);
    r.parameters = std::move(parameters);
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_diff = std::fabs(lhs - rhs);
    r.tol = tol;
    r.pass = r.abs_diff <= tol;
    return r;
}

namespace {

std::string params(std::initializer_list<std::pair<const char*, double>> items) {
    // Shortest form that reads back to the same double.
    std::string out;
    char buf[32];
    for (const auto& [key, value] : items) {
        auto end = std::to_chars(buf, buf + sizeof buf, value).ptr;
        out += (out.empty() ? "" : " ") + std::string(key) + '=' + std::string(buf, end);
    }
    return out;
}

void require_identity_domain(double v, double x) {
    if (!std::isfinite(v)) throw DomainError("order v must be finite");
    double threshold = std::pow(2.0, 1.0 / 6.0) + kPolylogIdentityMargin;
    if (!(x > threshold) || !std::isfinite(x))
        throw DomainError("polylog identities need x > 2^(1/6) + " + std::to_string(kPolylogIdentityMargin) +
                          ", got " + std::to_string(x));
}

// Upper bound on Li_v(w) / w = sum_k k^{-v} w^{k-1} for 0 <= w < 1.
double polylog_ratio_bound(double v, double w) {
    if (v >= 0.0) return 1.0 / (1.0 - w);
    double a = -v;
    double sum = 0.0;
    for (int k = 1; k < 1'000'000; ++k) {
        sum += std::pow(k, a) * std::pow(w, k - 1);
        double ratio = std::pow((k + 1.0) / k, a) * w;
        if (ratio < 0.9) {
            double next = std::pow(k + 1.0, a) * std::pow(w, k);
            if (next <= 1e-3 * sum) return sum + next / (1.0 - ratio);
        }
    }
    return INFINITY;
}

// sup_{J >= j} J^{-v} x^{-J}: the function peaks at J = -v / log x when v < 0.
double power_exp_sup(double v, double x, double j) {
    double peak = v < 0.0 ? -v / std::log(x) : 0.0;
    double at = std::fmax(j, peak);
    return std::pow(at, -v) * std::pow(x, -at);
}

}  // namespace

Estimate mobius_class_polylog_sum(double v, double x, int sign, const TruncationPolicy& policy) {
    require_identity_domain(v, x);
    policy.validate();
    const double tol = policy.abs_tol;
    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t n = 2; n <= policy.term_limit; ++n) {
        double nd = static_cast<double>(n);
        int mu = mobius(n);
        if (mu != 0 && (sign == 0 || mu == sign)) {
            double weight = std::pow(nd, -v);
            Estimate li = polylog(v, std::pow(x, -nd), policy.with_tol(tol / (4.0 * nd * nd * std::fmax(1.0, weight))));
            double factor = sign == 0 ? mu * weight : weight;
            sum += factor * li.value;
            bound += weight * li.error_bound;
        }
        // |n^{-v} Li_v(x^{-n})| <= n^{-v} x^{-n} C_v(x^{-N-1}) for n > N, a geometric majorant.
        double n1 = nd + 1.0;
        double ratio = std::max(1.0, std::pow((n1 + 1.0) / n1, -v)) / x;
        if (ratio >= 1.0) continue;
        double w = std::pow(x, -n1);
        double tail = std::pow(n1, -v) * w * polylog_ratio_bound(v, w) / (1.0 - ratio);
        if (tail <= tol / 2.0) return {sum.value(), bound + tail, n - 1};
    }
    throw PrecisionError("Mobius class polylog sum exceeds term_limit at x = " + std::to_string(x));
}

Estimate mobius_even_polylog_sum(double v, double x, const TruncationPolicy& policy) {
    return mobius_class_polylog_sum(v, x, 1, policy);
}

Estimate mobius_odd_polylog_sum(double v, double x, const TruncationPolicy& policy) {
    return mobius_class_polylog_sum(v, x, -1, policy);
}

Estimate non_divisor_polylog_sum(double v, double x, const TruncationPolicy& policy, PairingRule rule) {
    require_identity_domain(v, x);
    policy.validate();
    const double tol = policy.abs_tol;
    const double peak = v < 0.0 ? -v / std::log(x) : 0.0;
    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t n = 2; n <= policy.term_limit; ++n) {
        double nd = static_cast<double>(n);
        int mu_n = mobius(n);
        if (mu_n != 0) {
            for (std::int64_t m = 2; m < n; ++m) {
                if (n % m == 0) continue;
                int mu_m = mobius(m);
                if (mu_m == 0) continue;
                double md = static_cast<double>(m);
                double j = rule == PairingRule::literal ? nd * md : static_cast<double>(std::lcm(n, m));
                double weight = std::pow(j, -v);
                double sub = tol / (8.0 * nd * nd * md * md * std::fmax(1.0, weight));
                Estimate li = polylog(v, std::pow(x, -j), policy.with_tol(sub));
                sum += mu_n * mu_m * weight * li.value;
                bound += weight * li.error_bound;
            }
        }
        // Each n > N has fewer than n - 2 inner terms, all with J >= 2n, so the tail is
        // at most sum_{n>N} (n-2) (2n)^{-v} x^{-2n} C_v(x^{-2N-2}) once 2N+2 is past the peak.
        if (n < 3 || 2.0 * (nd + 1.0) < peak) continue;
        double n1 = nd + 1.0;
        double ratio = std::pow(x, -2.0) * (nd / (nd - 1.0)) * std::max(1.0, std::pow((n1 + 1.0) / n1, -v));
        if (ratio >= 1.0) continue;
        double w = std::pow(x, -2.0 * n1);
        double tail = (n1 - 2.0) * power_exp_sup(v, x, 2.0 * n1) * polylog_ratio_bound(v, w) / (1.0 - ratio);
        if (tail <= tol / 2.0) return {sum.value(), bound + tail, n - 1};
    }
    throw PrecisionError("non-divisor polylog sum exceeds term_limit at x = " + std::to_string(x));
}

IdentityReport even_class_identity(double v, double x, double tol, const TruncationPolicy& policy, PairingRule rule) {
    Estimate lhs = mobius_even_polylog_sum(v, x, policy);
    Estimate rhs = non_divisor_polylog_sum(v, x, policy, rule);
    return make_report("even-class", params({{"v", v}, {"x", x}}), lhs.value, rhs.value, tol);
}

IdentityReport odd_class_identity(double v, double x, double tol, const TruncationPolicy& policy, PairingRule rule) {
    Estimate lhs = mobius_odd_polylog_sum(v, x, policy);
    Estimate rhs = non_divisor_polylog_sum(v, x, policy, rule);
    Estimate head = polylog(v, 1.0 / x, policy);
    return make_report("odd-class", params({{"v", v}, {"x", x}}), lhs.value, head.value - 1.0 / x + rhs.value, tol);
}

IdentityReport parity_partition(double v, double x, double tol, const TruncationPolicy& policy) {
    Estimate even = mobius_even_polylog_sum(v, x, policy);
    Estimate odd = mobius_odd_polylog_sum(v, x, policy);
    Estimate signed_sum = mobius_class_polylog_sum(v, x, 0, policy);
    return make_report("parity", params({{"v", v}, {"x", x}}), even.value - odd.value, signed_sum.value, tol);
}

IdentityReport mobius_reconstruction(double v, double z, double tol, const TruncationPolicy& policy) {
    if (!(z > 0.0 && z < 1.0)) throw DomainError("reconstruction needs 0 < z < 1");
    if (!std::isfinite(v)) throw DomainError("order v must be finite");
    policy.validate();
    CompensatedSum sum;
    double bound = 0.0;
    for (std::int64_t n = 1; n <= policy.term_limit; ++n) {
        double nd = static_cast<double>(n);
        int mu = mobius(n);
        if (mu != 0) {
            double weight = std::pow(nd, -v);
            double sub = policy.abs_tol / (4.0 * nd * nd * std::fmax(1.0, weight));
            Estimate li = polylog(v, std::pow(z, nd), policy.with_tol(sub));
            sum += mu * weight * li.value;
            bound += weight * li.error_bound;
        }
        double n1 = nd + 1.0;
        double ratio = z * std::max(1.0, std::pow((n1 + 1.0) / n1, -v));
        if (ratio >= 1.0) continue;
        double w = std::pow(z, n1);
        double tail = std::pow(n1, -v) * w * polylog_ratio_bound(v, w) / (1.0 - ratio);
        if (tail <= policy.abs_tol / 2.0) return make_report("reconstruction", params({{"v", v}, {"z", z}}), sum.value(), z, tol);
    }
    throw PrecisionError("Mobius reconstruction exceeds term_limit");
}

std::vector<IdentityReport> class_identity_grid(const std::vector<double>& vs, const std::vector<double>& xs,
                                                double tol, const TruncationPolicy& policy, PairingRule rule) {
    std::vector<IdentityReport> out(2 * vs.size() * xs.size());
    parallel_for(vs.size() * xs.size(), [&](std::size_t i) {
        double v = vs[i / xs.size()];
        double x = xs[i % xs.size()];
        try {
            out[2 * i] = even_class_identity(v, x, tol, policy, rule);
            out[2 * i + 1] = odd_class_identity(v, x, tol, policy, rule);
        } catch (const Error& e) {
            std::string p = params({{"v", v}, {"x", x}}) + " error: " + e.what();
            out[2 * i] = make_report("even-class", p, NAN, NAN, tol);
            out[2 * i + 1] = make_report("odd-class", p, NAN, NAN, tol);
        }
    });
    return out;
}

IdentityReport non_divisor_symmetry(double sigma, const PrincipalCharacter& chi, double tol,
                                    const TruncationPolicy& policy, PairingRule rule) {
    Estimate lhs = mobius_self_sum(
        sigma, chi, policy, [](std::int64_t n) { return mobius(n) == 1 ? 1.0 : 0.0; }, 1.0);
    Estimate rhs = non_divisor_cross_sum(sigma, chi, policy, rule);
    return make_report("symmetry", params({{"sigma", sigma}, {"M", static_cast<double>(chi.modulus())}}), lhs.value,
                       rhs.value, tol);
}

IdentityReport euler_factor_removal(std::int64_t n, double sigma, std::int64_t modulus, std::int64_t p, double tol,
                                    const TruncationPolicy& policy) {
    if (n < 1) throw DomainError("n must be positive");
    bool prime = p >= 2;
    for (std::int64_t d = 2; prime && d * d <= p; ++d) prime = p % d != 0;
    if (!prime) throw PreconditionError(std::to_string(p) + " is not prime");
    if (modulus >= 1 && modulus % p == 0)
        throw PreconditionError(std::to_string(p) + " divides the modulus " + std::to_string(modulus));
    if (!(2.0 * n * sigma > 1.0)) throw DomainError("Euler factor removal needs sigma > 1/(2n)");
    PrincipalCharacter chi(modulus);
    PrincipalCharacter chi_p(modulus * p);
    auto self = [&](const PrincipalCharacter& c) {
        CovarianceSpec spec{CorrelationKind::diag, Rational(n), Rational(n), sigma, c};
        return covariance(spec, policy).value;
    };
    double lhs = self(chi) - self(chi_p);
    double rhs = 0.5 * polylog(2.0, std::pow(static_cast<double>(p), -2.0 * n * sigma), policy).value;
    return make_report("euler-factor",
                       params({{"n", static_cast<double>(n)}, {"sigma", sigma}, {"M", static_cast<double>(modulus)},
                               {"p", static_cast<double>(p)}}),
                       lhs, rhs, tol);
}

OrderShiftReport polylog_order_shift(double v, double x, std::int64_t alpha, const TruncationPolicy& policy) {
    if (!std::isfinite(v)) throw DomainError("order v must be finite");
    if (alpha < 1) throw DomainError("alpha must be a positive integer");
    const double u0 = std::log(x);
    if (!(u0 > 2.0 * kOrderShiftStep) || !std::isfinite(u0)) throw DomainError("order shift needs log x > 2e-4");
    policy.validate();
    const double a = static_cast<double>(alpha);
    const TruncationPolicy fine = policy.with_tol(1e-15);
    auto li = [&](double order, double u) { return polylog(order, std::exp(-a * u), fine).value; };

    const double upper = u0 + 40.0 / a;
    double quad_error = 0.0;
    double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double u) { return li(v, u); }, u0, upper, 15, 1e-13, &quad_error);
    // int_U^inf |Li_v(e^{-a u})| du <= C_v(e^{-a U}) e^{-a U} / a.
    double w = std::exp(-a * upper);
    double tail_bound = polylog_ratio_bound(v, w) * w / a;
    if (!(quad_error <= kOrderShiftIntegralTol / 10.0) || !(tail_bound <= kOrderShiftIntegralTol / 10.0))
        throw PrecisionError("order-shift quadrature did not reach its tolerance");

    OrderShiftReport out;
    std::string p = params({{"v", v}, {"x", x}, {"alpha", a}});
    out.integral = make_report("order-shift-integral", p, integral, li(v + 1.0, u0) / a, kOrderShiftIntegralTol);
    const double h = kOrderShiftStep;
    double slope = (li(v, u0 + h) - li(v, u0 - h)) / (2.0 * h);
    out.derivative = make_report("order-shift-derivative", p, slope, -a * li(v - 1.0, u0), kOrderShiftDerivativeTol);
    return out;
}

}  // namespace lcorr
