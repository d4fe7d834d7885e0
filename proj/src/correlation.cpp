#include "lcorr/correlation.hpp"

#include "lcorr/errors.hpp"
#include "lcorr/parallel.hpp"
#include "lcorr/special_fns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace lcorr {

const char* to_string(CorrelationKind kind) noexcept {
    return kind == CorrelationKind::diag ? "diag" : "vert";
}

CorrelationKind parse_kind(const std::string& text) {
    if (text == "diag") return CorrelationKind::diag;
    if (text == "vert") return CorrelationKind::vert;
    throw ParseError("kind must be 'diag' or 'vert', got '" + text + "'");
}

const char* to_string(PairingRule rule) noexcept {
    return rule == PairingRule::literal ? "literal" : "reduced";
}

PairingRule parse_pairing(const std::string& text) {
    if (text == "literal") return PairingRule::literal;
    if (text == "reduced") return PairingRule::reduced;
    throw ParseError("pairing must be 'literal' or 'reduced', got '" + text + "'");
}

const char* to_string(Representation rep) noexcept {
    return rep == Representation::li2_prime_sum ? "li2_prime_sum" : "k_series";
}

bool is_resonant(const Rational& alpha, const Rational& beta) { return divides(beta, alpha); }

namespace {

void check_pair(const Rational& alpha, const Rational& beta, double sigma) {
    if (!alpha.is_positive() || !beta.is_positive())
        throw DomainError("alpha and beta must be positive, got " + alpha.str() + " and " + beta.str());
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be finite and positive");
}

void check_ordered(const CovarianceSpec& spec, CorrelationKind expected) {
    check_pair(spec.alpha, spec.beta, spec.sigma);
    if (spec.kind != expected)
        throw PreconditionError(std::string("spec kind is ") + to_string(spec.kind) + ", expected " +
                                to_string(expected));
    if (spec.alpha < spec.beta)
        throw PreconditionError("covariance needs alpha >= beta; got " + spec.alpha.str() + " < " + spec.beta.str());
}

PairSum pair_sum_k_series(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    const double q = static_cast<double>(smallest_excluded_prime(chi));
    CompensatedSum sum;
    double bound = 0.0;
    const TruncationPolicy inner = policy.with_tol(policy.abs_tol / 4.0);
    for (std::int64_t k = 1; k <= policy.term_limit; ++k) {
        double kd = static_cast<double>(k);
        Estimate pk = prime_zeta(kd * x, chi, inner);
        sum += pk.value / (kd * kd);
        bound += pk.error_bound / (kd * kd);
        // P_chi0(y) <= sum_{m >= q} m^{-y} once y > 1.
        double y = (kd + 1.0) * x;
        if (y > 1.0) {
            double tail = (1.0 + q / (y - 1.0)) / ((kd + 1.0) * (kd + 1.0)) * std::pow(q, -y) / (1.0 - std::pow(q, -x));
            if (tail <= policy.abs_tol / 2.0) return {{sum.value(), bound + tail, k}, Representation::k_series};
        }
    }
    throw PrecisionError("k-series at x = " + std::to_string(x) + " needs more than term_limit terms");
}

}  // namespace

PairSum pair_sum(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy, Representation rep) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("pair sum needs finite x > 0");
    if (rep == Representation::li2_prime_sum) return {li2_prime_sum(x, chi, policy), rep};
    return pair_sum_k_series(x, chi, policy);
}

PairSum pair_sum(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    return pair_sum(x, chi, policy, x > 1.0 ? Representation::li2_prime_sum : Representation::k_series);
}

CovarianceTerm covariance_term(CorrelationKind kind, const Rational& alpha, const Rational& beta, double sigma,
                               PairingRule rule) {
    check_pair(alpha, beta, sigma);
    if (alpha < beta) throw PreconditionError("covariance_term needs alpha >= beta");
    CovarianceTerm term;
    term.resonant = is_resonant(alpha, beta);
    if (term.resonant || rule == PairingRule::literal) {
        if (term.resonant) {
            term.coefficient = (beta / alpha).to_double() / 2.0;
            term.base = kind == CorrelationKind::diag ? 2.0 * alpha.to_double() * sigma
                                                      : (1.0 + (alpha / beta).to_double()) * sigma;
        } else {
            double ab = (alpha * beta).to_double();
            term.coefficient = 1.0 / (2.0 * ab);
            term.base = kind == CorrelationKind::diag ? 2.0 * ab * sigma : (alpha + beta).to_double() * sigma;
        }
        return term;
    }
    // alpha/beta = a/b in lowest terms; frequencies k alpha = k' beta pair at k = jb, k' = ja.
    Rational ratio = alpha / beta;
    double a = static_cast<double>(ratio.num());
    double b = static_cast<double>(ratio.den());
    Rational g = alpha / Rational(ratio.num());
    term.coefficient = 1.0 / (2.0 * a * b);
    term.base = kind == CorrelationKind::diag ? 2.0 * a * b * g.to_double() * sigma : (a + b) * sigma;
    return term;
}

namespace {

constexpr double kRelativeTol = 1e-10;

CovarianceResult evaluate_term(const CovarianceTerm& term, const PrincipalCharacter& chi,
                               const TruncationPolicy& policy) {
    // S(x) >= q^{-x} for x > 1; capping the tolerance at a fraction of that keeps
    // tiny covariances accurate relative to their size.
    double tol = policy.abs_tol / term.coefficient;
    if (term.base > 1.0)
        tol = std::fmin(tol, std::fmax(kRelativeTol * std::pow(static_cast<double>(smallest_excluded_prime(chi)), -term.base),
                                       std::numeric_limits<double>::min()));
    PairSum s = pair_sum(term.base, chi, policy.with_tol(tol));
    return {term.coefficient * s.estimate.value, term.coefficient * s.estimate.error_bound, term,
            s.representation};
}

}  // namespace

CovarianceResult cov_diag(const CovarianceSpec& spec, const TruncationPolicy& policy, PairingRule rule) {
    check_ordered(spec, CorrelationKind::diag);
    return evaluate_term(covariance_term(spec.kind, spec.alpha, spec.beta, spec.sigma, rule), spec.chi, policy);
}

CovarianceResult cov_vert(const CovarianceSpec& spec, const TruncationPolicy& policy, PairingRule rule) {
    check_ordered(spec, CorrelationKind::vert);
    return evaluate_term(covariance_term(spec.kind, spec.alpha, spec.beta, spec.sigma, rule), spec.chi, policy);
}

CovarianceResult covariance(const CovarianceSpec& spec, const TruncationPolicy& policy, PairingRule rule) {
    return spec.kind == CorrelationKind::diag ? cov_diag(spec, policy, rule) : cov_vert(spec, policy, rule);
}

namespace {

CovarianceSpec with_pair(const CovarianceSpec& spec, const Rational& alpha, const Rational& beta) {
    CovarianceSpec s = spec;
    s.alpha = alpha;
    s.beta = beta;
    return s;
}

// Self-covariance R(gamma, gamma); for vert it does not depend on gamma.
CovarianceResult self_covariance(const CovarianceSpec& spec, const Rational& gamma, const TruncationPolicy& policy) {
    Rational label = spec.kind == CorrelationKind::vert ? Rational(1) : gamma;
    return covariance(with_pair(spec, label, label), policy);
}

CorrelationResult combine(const CovarianceResult& cross, const CovarianceResult& self_a,
                          const CovarianceResult& self_b) {
    if (!(self_a.value > 0.0) || !(self_b.value > 0.0))
        throw DegenerateError("self-covariance is not positive; correlation undefined");
    CorrelationResult out;
    out.value = cross.value / (std::sqrt(self_a.value) * std::sqrt(self_b.value));
    out.error_bound = std::abs(out.value) * (cross.error_bound / std::abs(cross.value) +
                                             0.5 * self_a.error_bound / self_a.value +
                                             0.5 * self_b.error_bound / self_b.value);
    out.resonant = cross.term.resonant;
    out.representation = cross.representation;
    return out;
}

}  // namespace

CorrelationResult corr(const CovarianceSpec& spec, const TruncationPolicy& policy, PairingRule rule) {
    check_pair(spec.alpha, spec.beta, spec.sigma);
    const Rational& hi = spec.alpha < spec.beta ? spec.beta : spec.alpha;
    const Rational& lo = spec.alpha < spec.beta ? spec.alpha : spec.beta;
    CovarianceResult self_hi = self_covariance(spec, hi, policy);
    if (hi == lo) {
        if (!(self_hi.value > 0.0)) throw DegenerateError("self-covariance is not positive; correlation undefined");
        return {1.0, 0.0, true, self_hi.representation};
    }
    CovarianceResult self_lo = spec.kind == CorrelationKind::vert ? self_hi : self_covariance(spec, lo, policy);
    CovarianceResult cross = covariance(with_pair(spec, hi, lo), policy, rule);
    return combine(cross, self_hi, self_lo);
}

double corr_asymptotic(const CovarianceSpec& spec) {
    check_pair(spec.alpha, spec.beta, spec.sigma);
    const Rational& hi = spec.alpha < spec.beta ? spec.beta : spec.alpha;
    const Rational& lo = spec.alpha < spec.beta ? spec.alpha : spec.beta;
    const double p = static_cast<double>(smallest_excluded_prime(spec.chi));
    const double a = hi.to_double();
    const double b = lo.to_double();
    const double s = spec.sigma;
    if (is_resonant(hi, lo)) {
        double ratio = (lo / hi).to_double();
        if (spec.kind == CorrelationKind::diag) return ratio * std::pow(p, (b - a) * s);
        return ratio * std::pow(p, (1.0 - (hi / lo).to_double()) * s);
    }
    if (spec.kind == CorrelationKind::diag) return std::pow(p, (b + a - 2.0 * a * b) * s) / (a * b);
    return std::pow(p, (2.0 - b - a) * s) / (a * b);
}

Estimate primeL_cov_closed(CorrelationKind kind, const Rational& alpha, const Rational& beta, double sigma,
                           double sigma2, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    if (!alpha.is_positive() || !beta.is_positive()) throw DomainError("alpha and beta must be positive");
    if (!std::isfinite(sigma) || !std::isfinite(sigma2)) throw DomainError("sigma values must be finite");
    if (!(alpha == beta)) return {0.0, 0.0, 0};
    double y = kind == CorrelationKind::vert ? sigma + sigma2 : alpha.to_double() * (sigma + sigma2);
    if (!(y > 0.0)) throw DomainError("prime-L covariance needs a positive combined real part");
    Estimate p = prime_zeta(y, chi, policy.with_tol(2.0 * policy.abs_tol));
    return {p.value / 2.0, p.error_bound / 2.0, p.terms};
}

std::size_t CorrelationTable::absent_count() const {
    std::size_t n = 0;
    for (const auto& row : values)
        for (const auto& cell : row)
            if (!cell) ++n;
    return n;
}

CorrelationTable build_table(CorrelationKind kind, const std::vector<Rational>& alphas,
                             const std::vector<Rational>& betas, double sigma, const PrincipalCharacter& chi,
                             const TruncationPolicy& policy, PairingRule rule) {
    if (alphas.empty() || betas.empty()) throw EmptyDomainError("table needs at least one row and one column");
    policy.validate();
    CorrelationTable table;
    table.kind = kind;
    table.sigma = sigma;
    table.modulus = chi.modulus();
    table.alphas = alphas;
    table.betas = betas;

    CovarianceSpec base{kind, Rational(1), Rational(1), sigma, chi};

    // Self-covariances are shared by every cell on a row or column.
    std::vector<Rational> labels;
    if (kind == CorrelationKind::vert) {
        labels.push_back(Rational(1));
    } else {
        std::map<Rational, int> seen;
        for (const auto& r : alphas) seen.emplace(r, 0);
        for (const auto& r : betas) seen.emplace(r, 0);
        for (const auto& [r, unused] : seen) labels.push_back(r);
    }
    std::vector<std::optional<CovarianceResult>> selfs(labels.size());
    std::vector<std::string> self_reason(labels.size());
    parallel_for(labels.size(), [&](std::size_t i) {
        try {
            selfs[i] = self_covariance(base, labels[i], policy);
        } catch (const SingularityError& e) {
            self_reason[i] = e.what();
        } catch (const Error& e) {
            throw TableError("self-covariance for " + labels[i].str() + ": " + e.what());
        }
    });
    auto self_index = [&](const Rational& r) -> std::size_t {
        if (kind == CorrelationKind::vert) return 0;
        return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), r) - labels.begin());
    };

    const std::size_t rows = alphas.size();
    const std::size_t cols = betas.size();
    table.values.assign(rows, std::vector<std::optional<double>>(cols));
    table.divis_mask.assign(rows, std::vector<bool>(cols, false));
    table.absent_reason.assign(rows, std::vector<std::string>(cols));
    std::vector<std::optional<double>> flat(rows * cols);
    std::vector<std::string> flat_reason(rows * cols);
    parallel_for(rows * cols, [&](std::size_t idx) {
        const Rational& a = alphas[idx / cols];
        const Rational& b = betas[idx % cols];
        const Rational& hi = a < b ? b : a;
        const Rational& lo = a < b ? a : b;
        auto ia = self_index(hi);
        auto ib = self_index(lo);
        if (!selfs[ia] || !selfs[ib]) {
            flat_reason[idx] = !selfs[ia] ? self_reason[ia] : self_reason[ib];
            return;
        }
        try {
            if (hi == lo) {
                flat[idx] = 1.0;
                return;
            }
            CovarianceResult cross = covariance(with_pair(base, hi, lo), policy, rule);
            flat[idx] = combine(cross, *selfs[ia], *selfs[ib]).value;
        } catch (const SingularityError& e) {
            flat_reason[idx] = e.what();
        } catch (const Error& e) {
            throw TableError("cell (alpha=" + a.str() + ", beta=" + b.str() + "): " + e.what());
        }
    });
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            table.values[i][j] = flat[i * cols + j];
            table.absent_reason[i][j] = flat_reason[i * cols + j];
            const Rational& a = alphas[i];
            const Rational& b = betas[j];
            table.divis_mask[i][j] = a < b ? is_resonant(b, a) : is_resonant(a, b);
        }
    return table;
}

double round_half_even(double value, int digits) {
    double scale = std::pow(10.0, digits);
    return std::nearbyint(value * scale) / scale;
}

}  // namespace lcorr
