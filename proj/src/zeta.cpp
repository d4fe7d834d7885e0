#include "lcorr/errors.hpp"
#include "lcorr/special_fns.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace lcorr {

namespace {

using cplx = std::complex<double>;

constexpr double kBorweinRate = 5.828427124746190;  // 3 + sqrt(8)
constexpr int kBorweinMaxTerms = 300;                // d_n stays below 1e230
constexpr int kEmMaxCorrections = 60;
constexpr int kEmTargetCorrections = 20;
constexpr double kEmRatio = 0.7;  // |s + 2m| / (2 pi N) at the target correction count

// w_k = 1 - d_k / d_n with d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!).
// Suffix sums keep the weights accurate where d_k is close to d_n.
std::vector<double> borwein_weights(int n) {
    std::vector<double> term(static_cast<std::size_t>(n) + 1);
    term[0] = 1.0;
    for (int i = 0; i < n; ++i)
        term[i + 1] = term[i] * 4.0 * (n + i) * (n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
    std::vector<double> suffix(static_cast<std::size_t>(n) + 2, 0.0);
    for (int i = n; i >= 0; --i) suffix[i] = suffix[i + 1] + term[i];
    double dn = suffix[0];
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w[k] = suffix[k + 1] / dn;
    return w;
}

int borwein_terms(double log_bound_numerator, double tol) {
    // Smallest n with exp(log_bound_numerator) / rate^n <= tol.
    double n = (log_bound_numerator - std::log(tol)) / std::log(kBorweinRate);
    int terms = static_cast<int>(std::ceil(std::fmax(n, 1.0)));
    if (terms > kBorweinMaxTerms) throw PrecisionError("alternating series needs more than " +
                                                       std::to_string(kBorweinMaxTerms) + " terms");
    return terms;
}

// B_{2k} / (2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
const std::array<double, kEmMaxCorrections + 1>& bernoulli_ratios() {
    static const std::array<double, kEmMaxCorrections + 1> table = [] {
        std::array<double, kEmMaxCorrections + 1> c{};
        constexpr double pi = std::numbers::pi;
        for (int k = 1; k <= kEmMaxCorrections; ++k) {
            double zeta2k;
            if (k == 1) zeta2k = pi * pi / 6.0;
            else if (k == 2) zeta2k = std::pow(pi, 4) / 90.0;
            else if (k == 3) zeta2k = std::pow(pi, 6) / 945.0;
            else {
                // Tail beyond 200 is below 200^{1-2k} / (2k-1) < 1e-17.
                double s = 0.0;
                for (int n = 200; n >= 2; --n) s += std::pow(static_cast<double>(n), -2.0 * k);
                zeta2k = 1.0 + s;
            }
            double sign = (k % 2 == 1) ? 1.0 : -1.0;
            c[k] = sign * 2.0 * zeta2k / std::pow(2.0 * pi, 2.0 * k);
        }
        return c;
    }();
    return table;
}

int em_cutoff(std::complex<double> s) {
    double n = (std::abs(s) + 2.0 * kEmTargetCorrections) / (2.0 * std::numbers::pi * kEmRatio);
    return std::max(10, static_cast<int>(std::ceil(n)));
}

// Adds N^{1-s}/(s-1) + N^{-s}/2 + sum_k c_k s(s+1)..(s+2k-2) N^{1-s-2k} to the
// partial sum over n < N. Returns false if the corrections stop shrinking
// before reaching tol. The remainder after m corrections is bounded by
// |s+2m+1| / (sigma+2m+1) times the first omitted correction.
bool em_finish(cplx s, int N, cplx partial, cplx n_pow_minus_s, double tol, ComplexEstimate& out) {
    const auto& c = bernoulli_ratios();
    double nd = static_cast<double>(N);
    cplx value = partial + n_pow_minus_s * (nd / (s - 1.0) + 0.5);
    cplx q = s * n_pow_minus_s / nd;
    double previous = INFINITY;
    for (int k = 1; k <= kEmMaxCorrections; ++k) {
        cplx term = c[k] * q;
        double magnitude = std::abs(term);
        double bound = std::abs(s + (2.0 * k - 1.0)) / (s.real() + 2.0 * k - 1.0) * magnitude;
        if (bound <= tol) {
            out = {value, bound};
            return true;
        }
        if (magnitude > previous) return false;
        previous = magnitude;
        value += term;
        q *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k) / (nd * nd);
    }
    return false;
}

void check_half_plane(cplx s, double radius) {
    if (!(s.real() > 0.0) || !std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw DomainError("zeta needs finite s with Re(s) > 0");
    if (std::abs(s - 1.0) < radius) throw SingularityError("zeta evaluated within the exclusion radius of s = 1");
}

}  // namespace

Estimate eta_real(double x, const TruncationPolicy& policy) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("eta_real needs finite x > 0");
    // Truncation error is at most 2 / ((3+sqrt 8)^n Gamma(x)).
    int n = borwein_terms(std::log(2.0) - std::lgamma(x), 0.5 * policy.abs_tol);
    auto w = borwein_weights(n);
    CompensatedSum sum;
    for (int k = 0; k < n; ++k) {
        double term = w[k] * std::pow(static_cast<double>(k + 1), -x);
        sum += (k % 2 == 0) ? term : -term;
    }
    double bound = 2.0 * std::exp(-std::lgamma(x) - n * std::log(kBorweinRate));
    return {sum.value(), bound, n};
}

Estimate zeta_real(double x, const TruncationPolicy& policy) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("zeta_real needs finite x > 0");
    if (std::abs(x - 1.0) < policy.singular_radius)
        throw SingularityError("zeta_real at " + std::to_string(x) + " is within the exclusion radius of 1");
    double denom = -std::expm1((1.0 - x) * std::numbers::ln2);
    Estimate eta = eta_real(x, policy.with_tol(policy.abs_tol * std::abs(denom)));
    return {eta.value / denom, eta.error_bound / std::abs(denom), eta.terms};
}

double zeta_minus_one(double x, const TruncationPolicy& policy) {
    if (x < 8.0) return zeta_real(x, policy).value - 1.0;
    // sum_{k>=2} k^{-x}; the tail past K is below K^{1-x}/(x-1), negligible against 2^{-x}.
    double sum = 0.0;
    for (int k = 400; k >= 2; --k) sum += std::pow(static_cast<double>(k), -x);
    return sum;
}

double log_abs_zeta_real(double x, const TruncationPolicy& policy) {
    if (x > 1.5) return std::log1p(zeta_minus_one(x, policy));
    return std::log(std::abs(zeta_real(x, policy).value));
}

ComplexEstimate zeta_borwein(cplx s, double tol) {
    double t = std::abs(s.imag());
    if (t > kBorweinMaxAbsT) throw DomainError("alternating series route limited to |Im s| <= 64");
    cplx denom = 1.0 - std::exp((1.0 - s) * std::numbers::ln2);
    // 1/|Gamma(s)| <= 1.5 (1+2|t|) e^{pi|t|/2} for Re(s) >= 1/2; below that,
    // 1/Gamma(s) = s / Gamma(s+1) adds a factor |s|.
    double log_num = std::log(3.0 * (1.0 + 2.0 * t)) + std::numbers::pi * t / 2.0;
    if (s.real() < 0.5) log_num += std::log(std::fmax(1.0, std::abs(s)));
    double abs_denom = std::abs(denom);
    int n = borwein_terms(log_num, tol * abs_denom);
    auto w = borwein_weights(n);
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx term = w[k] * std::exp(-s * std::log(static_cast<double>(k + 1)));
        sum += (k % 2 == 0) ? term : -term;
    }
    double bound = std::exp(log_num - n * std::log(kBorweinRate)) / abs_denom;
    return {sum / denom, bound};
}

ComplexEstimate zeta_euler_maclaurin(cplx s, double tol) {
    if (!(s.real() > 0.0)) throw DomainError("Euler-Maclaurin route needs Re(s) > 0");
    for (int N = em_cutoff(s); N <= (1 << 26); N *= 2) {
        cplx partial = 0.0;
        for (int n = N - 1; n >= 1; --n) partial += std::exp(-s * std::log(static_cast<double>(n)));
        ComplexEstimate out;
        if (em_finish(s, N, partial, std::exp(-s * std::log(static_cast<double>(N))), tol, out)) return out;
    }
    throw PrecisionError("Euler-Maclaurin summation did not reach the tolerance");
}

ComplexEstimate zeta_complex(cplx s, const TruncationPolicy& policy) {
    check_half_plane(s, policy.singular_radius);
    if (std::abs(s.imag()) <= kBorweinMaxAbsT) {
        // Near s = 1 + 2 pi i k / log 2 the eta-to-zeta factor vanishes.
        cplx denom = 1.0 - std::exp((1.0 - s) * std::numbers::ln2);
        if (std::abs(denom) > 1e-3) return zeta_borwein(s, policy.abs_tol);
    }
    return zeta_euler_maclaurin(s, policy.abs_tol);
}

ZetaLine::ZetaLine(double sigma, double max_abs_t, const TruncationPolicy& policy)
    : sigma_(sigma), tol_(policy.abs_tol), policy_(policy) {
    check_half_plane({sigma, max_abs_t}, policy.singular_radius);
    // Room for one doubling retry at the largest t.
    std::size_t size = 2 * static_cast<std::size_t>(em_cutoff({sigma, max_abs_t})) + 1;
    magnitude_.resize(size);
    log_n_.resize(size);
    for (std::size_t n = 1; n < size; ++n) {
        log_n_[n] = std::log(static_cast<double>(n));
        magnitude_[n] = std::exp(-sigma * log_n_[n]);
    }
}

ComplexEstimate ZetaLine::operator()(double t) const {
    cplx s(sigma_, t);
    if (std::abs(t) <= kBorweinMaxAbsT) return zeta_complex(s, policy_);
    for (int N = em_cutoff(s); static_cast<std::size_t>(N) < magnitude_.size(); N *= 2) {
        double re = 0.0, im = 0.0;
        for (int n = N - 1; n >= 1; --n) {
            double phase = t * log_n_[n];
            re += magnitude_[n] * std::cos(phase);
            im -= magnitude_[n] * std::sin(phase);
        }
        double phase = t * log_n_[N];
        cplx n_pow = magnitude_[N] * cplx(std::cos(phase), -std::sin(phase));
        ComplexEstimate out;
        if (em_finish(s, N, {re, im}, n_pow, tol_, out)) return out;
    }
    return zeta_euler_maclaurin(s, tol_);
}

double log_abs_L_real(double x, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    double value = log_abs_zeta_real(x, policy);
    for (std::int64_t p : chi.prime_factors()) value += std::log1p(-std::pow(static_cast<double>(p), -x));
    return value;
}

namespace {

LineValue finish_line_value(cplx s, cplx zeta, const PrincipalCharacter& chi) {
    LineValue out;
    out.abs_zeta = std::abs(zeta);
    out.near_zero = out.abs_zeta < kNearZeroThreshold;
    out.value = std::log(std::fmax(out.abs_zeta, 1e-300));
    for (std::int64_t p : chi.prime_factors())
        out.value += std::log(std::abs(1.0 - std::exp(-s * std::log(static_cast<double>(p)))));
    return out;
}

}  // namespace

LineValue log_abs_L_line(ComplexPoint point, const PrincipalCharacter& chi, const TruncationPolicy& policy) {
    if (!(point.sigma > 0.0)) throw DomainError("log_abs_L_line needs sigma > 0");
    cplx s(point.sigma, point.t);
    return finish_line_value(s, zeta_complex(s, policy).value, chi);
}

LineValue log_abs_L_line(const ZetaLine& line, double t, const PrincipalCharacter& chi) {
    cplx s(line.sigma(), t);
    return finish_line_value(s, line(t).value, chi);
}

}  // namespace lcorr
