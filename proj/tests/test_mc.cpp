#include "lcorr/errors.hpp"
#include "lcorr/mc.hpp"
#include "lcorr/special_fns.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace lcorr;

namespace {

const TruncationPolicy kDefault{};
const PrincipalCharacter kOne{1};

SamplingPlan plan(std::int64_t n, std::uint64_t seed, double span = 1e5) {
    SamplingPlan p;
    p.n_samples = n;
    p.seed = seed;
    p.t_span = span;
    return p;
}

LinePair reP(Rational a, Rational b, double sigma) {
    return {LineKind::reP, CorrelationKind::vert, a, b, sigma, sigma, kOne};
}

}  // namespace

TEST_CASE("counter-based sampling") {
    // Reference output of SplitMix64 seeded with 0.
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    SamplingPlan p = plan(1000, 7);
    for (std::int64_t i = 0; i < 1000; ++i) {
        double t = sample_t(p, i);
        REQUIRE(t >= p.t_start);
        REQUIRE(t <= p.t_start + p.t_span);
        REQUIRE(t == sample_t(p, i));
    }
    CHECK(sample_t(p, 3) != sample_t(plan(1000, 8), 3));
    p.sampler = Sampler::stratified;
    for (std::int64_t i = 0; i < 1000; ++i) {
        double u = (sample_t(p, i) - p.t_start) / p.t_span * 1000;
        REQUIRE(u >= static_cast<double>(i));
        REQUIRE(u < static_cast<double>(i + 1));
    }
    CHECK(parse_sampler("stratified") == Sampler::stratified);
    CHECK_THROWS_AS(parse_sampler("grid"), ParseError);
    CHECK_THROWS_AS(plan(1, 0).validate(), DomainError);
    SamplingPlan bad = plan(10, 0);
    bad.t_span = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("moment estimator") {
    SampleStreams s;
    s.x = {2.0, 2.0, 2.0};
    s.y = {2.0, 2.0, 2.0};
    auto c = estimate_cov(s);
    CHECK(c.raw_moment == 4.0);
    CHECK(c.std_error == 0.0);
    CHECK(c.degenerate);

    s.x = {1.0, 2.0, 3.0, 4.0};
    s.y = {2.0, 0.0, -1.0, 5.0};
    auto m = estimate_cov(s);
    // Products 2, 0, -3, 20: mean 4.75, squared deviations sum to 322.75.
    CHECK(m.raw_moment == doctest::Approx(4.75));
    CHECK(m.std_error == doctest::Approx(std::sqrt(322.75 / 3 / 4)));
    CHECK(m.mean_x == doctest::Approx(2.5));
    CHECK(m.centered_moment == doctest::Approx(4.75 - 2.5 * 1.5));
    CHECK(m.std_x == doctest::Approx(std::sqrt(5.0 / 3)));

    s.x = {1.0};
    s.y = {1.0};
    CHECK_THROWS_AS(estimate_cov(s), InsufficientDataError);
    s.y = {1.0, 2.0};
    CHECK_THROWS_AS(estimate_cov(s), PreconditionError);
}

TEST_CASE("line sampling") {
    auto same = sample_line({LineKind::logL, CorrelationKind::vert, 1, 1, 2.0, 2.0, kOne}, plan(200, 1), kDefault);
    REQUIRE(same.x.size() == 200);
    CHECK(same.x == same.y);
    CHECK(same.rejected == 0);
    // Spot-check against direct point evaluation.
    SamplingPlan p = plan(200, 1);
    CHECK(same.x[17] == log_abs_L_line(ZetaLine(2.0, 2e5, kDefault), sample_t(p, 17), kOne).value);

    auto diag = sample_line({LineKind::logL, CorrelationKind::diag, 2, 1, 1.0, 1.0, kOne}, plan(50, 4), kDefault);
    double t = sample_t(plan(50, 4), 9);
    CHECK(diag.x[9] == doctest::Approx(log_abs_L_line(ComplexPoint{2.0, 2.0 * t}, kOne, kDefault).value).epsilon(1e-12));
    CHECK(diag.y[9] == doctest::Approx(log_abs_L_line(ComplexPoint{1.0, t}, kOne, kDefault).value).epsilon(1e-12));

    auto two = sample_line(reP(2, 3, 1.5), plan(100, 3), kDefault);
    CHECK(two.x != two.y);
    double direct = 0.0;
    double t0 = sample_t(plan(100, 3), 0);
    for (std::int64_t q : sieve_primes(kReP_PrimeLimit)) direct += std::pow(q, -1.5) * std::cos(2 * t0 * std::log(q));
    CHECK(two.x[0] == doctest::Approx(direct).epsilon(1e-12));

    CHECK_THROWS_AS(sample_line(reP(2, 3, 1.0), plan(10, 0), kDefault), DomainError);
    CHECK_THROWS_AS(sample_line({LineKind::logL, CorrelationKind::vert, 1, 1, -0.5, -0.5, kOne}, plan(10, 0), kDefault),
                    DomainError);
    CHECK(parse_line_kind("reP") == LineKind::reP);
}

TEST_CASE("results do not depend on the worker count") {
    LinePair pair{LineKind::logL, CorrelationKind::vert, 2, 1, 1.0, 1.0, kOne};
    setenv("LCORR_THREADS", "1", 1);
    auto a = estimate_cov(sample_line(pair, plan(300, 11), kDefault));
    setenv("LCORR_THREADS", "4", 1);
    auto b = estimate_cov(sample_line(pair, plan(300, 11), kDefault));
    unsetenv("LCORR_THREADS");
    CHECK(a.raw_moment == b.raw_moment);
    CHECK(a.std_error == b.std_error);
    CHECK(a.partition.size() == 2);
    CHECK(b.partition.size() == 5);
}

TEST_CASE("prime sums on vertical lines are uncorrelated unless resonant") {
    for (auto [a, b] : {std::pair{2, 3}, {3, 4}, {2, 5}}) {
        auto c = verify_prime_sum_covariance(a, b, 1.5, 1.5, kOne, plan(20'000, 101), kDefault);
        INFO("alpha = " << a << ", beta = " << b);
        CHECK(c.closed_form == 0.0);
        CHECK(std::fabs(c.estimate.raw_moment) <= 3 * c.estimate.std_error);
        CHECK(c.mean_z_x <= 3.0);
    }
    auto r = verify_prime_sum_covariance(2, 2, 1.5, 1.5, kOne, plan(20'000, 101), kDefault);
    CHECK(std::fabs(r.closed_form - prime_zeta(3.0, kOne, kDefault).value / 2) <= 2e-10);
    CHECK(r.z_score <= 3.0);
    CHECK(r.closed_error < 1e-8);
}

TEST_CASE("stable when the span is quadrupled") {
    auto a = verify_prime_sum_covariance(2, 2, 1.5, 1.5, kOne, plan(20'000, 5, 1e5), kDefault);
    auto b = verify_prime_sum_covariance(2, 2, 1.5, 1.5, kOne, plan(20'000, 5, 4e5), kDefault);
    double combined = std::hypot(a.estimate.std_error, b.estimate.std_error);
    CHECK(std::fabs(a.estimate.raw_moment - b.estimate.raw_moment) <= 3 * combined);
    auto c = verify_log_covariance({CorrelationKind::vert, 2, 1, 1.5, kOne}, plan(1000, 5, 1e5), kDefault);
    auto d = verify_log_covariance({CorrelationKind::vert, 2, 1, 1.5, kOne}, plan(1000, 5, 4e5), kDefault);
    combined = std::hypot(c.estimate.std_error, d.estimate.std_error);
    CHECK(std::fabs(c.estimate.raw_moment - d.estimate.raw_moment) <= 3 * combined);
}

TEST_CASE("log L covariances against closed forms") {
    // Smaller samples than the acceptance runs; the z-score test is the same.
    auto v21 = verify_log_covariance({CorrelationKind::vert, 2, 1, 1.0, kOne}, plan(2000, 17), kDefault);
    CHECK(v21.closed_form == doctest::Approx(li2_prime_sum(3.0, kOne, kDefault).value / 4).epsilon(1e-10));
    CHECK(v21.z_score <= 3.0);
    CHECK(v21.mean_z_x <= 3.0);
    CHECK(v21.mean_z_y <= 3.0);
    CHECK(v21.estimate.rejected == 0);
    auto d22 = verify_log_covariance({CorrelationKind::diag, 2, 2, 1.5, kOne}, plan(2000, 17), kDefault);
    CHECK(d22.z_score <= 3.0);
    auto m6 = verify_log_covariance({CorrelationKind::vert, 3, 3, 1.2, PrincipalCharacter(6)}, plan(2000, 23), kDefault);
    CHECK(m6.z_score <= 3.0);
}

TEST_CASE("empirical correlation") {
    auto self = estimate_corr({CorrelationKind::vert, 1, 1, 1.0, kOne}, plan(200, 3), kDefault);
    CHECK(self.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(self.batch_values.size() == kCorrelationBatches);
    CHECK_THROWS_AS(estimate_corr({CorrelationKind::vert, 2, 1, 1.0, kOne}, plan(50, 3), kDefault),
                    InsufficientDataError);
    auto c = contrast_corr({CorrelationKind::vert, 4, 2, 1.0, kOne}, {CorrelationKind::vert, 5, 2, 1.0, kOne},
                           plan(2000, 29), kDefault);
    CHECK(c.difference == doctest::Approx(c.first.value - c.second.value));
    CHECK(c.z_score >= 2.0);
    CHECK_THROWS_AS(contrast_corr({CorrelationKind::vert, 4, 2, 1.0, kOne}, {CorrelationKind::diag, 5, 2, 1.0, kOne},
                                  plan(200, 1), kDefault),
                    PreconditionError);
}
