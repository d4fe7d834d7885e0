#include "lcorr/errors.hpp"
#include "lcorr/gap_mse.hpp"
#include "lcorr/identities.hpp"
#include "lcorr/special_fns.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace lcorr;

namespace {

const TruncationPolicy kDefault{};
const TruncationPolicy kTight = kDefault.with_tol(1e-15);
constexpr auto kReduced = PairingRule::reduced;

int mu_oracle(long n) {
    int result = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
    }
    return n > 1 ? -result : result;
}

// Li_v(w) by plain summation; callers keep w well below 1.
double li_oracle(double v, double w) {
    double sum = 0.0;
    for (int k = 1; k < 5000; ++k) {
        double t = std::pow(w, k) * std::pow(k, -v);
        sum += t;
        if (k > 10 && t < 1e-22) break;
    }
    return sum;
}

double even_oracle(double v, double x, int sign) {
    double sum = 0.0;
    for (long n = 2; n < 3000; ++n)
        if (mu_oracle(n) == sign) sum += std::pow(n, -v) * li_oracle(v, std::pow(x, -n));
    return sum;
}

// Both forms of the non-divisor sum by direct double loops.
double cross_oracle(double v, double x, bool reduced) {
    double sum = 0.0;
    for (long n = 2; n < 400; ++n) {
        int mn = mu_oracle(n);
        if (!mn) continue;
        for (long m = 2; m < n; ++m) {
            int mm = mu_oracle(m);
            if (n % m == 0 || !mm) continue;
            double j = reduced ? std::lcm(n, m) : double(n) * m;
            if (j * std::log(x) > 700) continue;
            sum += mn * mm * std::pow(j, -v) * li_oracle(v, std::pow(x, -j));
        }
    }
    return sum;
}

}  // namespace

TEST_CASE("Mobius class sums") {
    // Leading terms: n = 6 for the even class, n = 2 for the odd class.
    double even = mobius_even_polylog_sum(2, 2, kTight).value;
    CHECK(std::abs(even - 0.000445951726706689) <= 1e-15);
    CHECK(even > li_oracle(2, 1.0 / 64) / 36);
    CHECK(std::abs(mobius_odd_polylog_sum(2, 2, kTight).value - even_oracle(2, 2, -1)) <= 1e-14);
    CHECK(mobius_odd_polylog_sum(2, 2, kDefault).value > li_oracle(2, 0.25) / 4);
    for (auto [v, x] : {std::pair{-1.0, 1.5}, {0.0, 2.0}, {0.5, 1.2}, {3.0, 1.15}, {-4.0, 1.2}})
        for (int sign : {1, -1}) {
            double ours = mobius_class_polylog_sum(v, x, sign, kDefault).value;
            double oracle = even_oracle(v, x, sign);
            INFO("v = " << v << ", x = " << x << ", sign = " << sign);
            REQUIRE(std::abs(ours - oracle) <= 1e-10 * std::fmax(1.0, std::abs(oracle)));
        }
}

TEST_CASE("non-divisor sums match direct double loops") {
    for (auto [v, x] : {std::pair{2.0, 2.0}, {1.0, 10.0}, {-1.0, 1.5}, {3.0, 1.2}, {0.5, 1.3}})
        for (bool reduced : {false, true}) {
            double ours = non_divisor_polylog_sum(v, x, kDefault, reduced ? kReduced : PairingRule::literal).value;
            INFO("v = " << v << ", x = " << x << ", reduced = " << reduced);
            REQUIRE(std::abs(ours - cross_oracle(v, x, reduced)) <= 1e-10);
        }
}

TEST_CASE("literal class identities miss by the non-coprime pairs") {
    // Gaps frozen from 40-digit evaluations of both sides. Pairs such as (10, 6)
    // enter as x^{-60} instead of x^{-30}.
    struct Case {
        double v, x, gap, tol;
    };
    for (auto c : {Case{2, 2, 3.1048e-12, 1e-15}, Case{2, 1.5, 1.7452e-8, 1e-12}, Case{0, 2, 2.7946e-9, 1e-13},
                   Case{3, 1.2, 4.8747e-7, 1e-11}, Case{2, 1.15, 5.5386e-5, 1e-9}, Case{-2, 1.15, 60.032, 1e-3}}) {
        INFO("v = " << c.v << ", x = " << c.x);
        auto even = even_class_identity(c.v, c.x, 1e-7, kTight);
        auto odd = odd_class_identity(c.v, c.x, 1e-7, kTight);
        REQUIRE(std::abs((even.lhs - even.rhs) - c.gap) <= c.tol);
        REQUIRE(std::abs((odd.lhs - odd.rhs) - c.gap) <= c.tol + 1e-12 * std::abs(odd.lhs));
    }
    CHECK(odd_class_identity(1, 10, 1e-13, kTight).abs_diff <= 1e-14);
    CHECK(even_class_identity(1, 10, 1e-10, kDefault).pass);
}

TEST_CASE("lcm pairing makes both class identities exact") {
    for (double v : {-4.0, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0})
        for (double x : {1.15, 1.2, 1.5, 2.0, 10.0}) {
            auto even = even_class_identity(v, x, 1e-9, kDefault, kReduced);
            auto odd = odd_class_identity(v, x, 1e-9, kDefault, kReduced);
            INFO("v = " << v << ", x = " << x);
            double scale = std::fmax(1.0, std::abs(even.lhs));
            REQUIRE(even.abs_diff <= 1e-9 * scale);
            REQUIRE(odd.abs_diff <= 1e-9 * std::fmax(1.0, std::abs(odd.lhs)));
        }
}

TEST_CASE("class identity grid") {
    auto grid = class_identity_grid({0.0, 2.0}, {1.5, 10.0}, 1e-7, kDefault);
    REQUIRE(grid.size() == 8);
    CHECK(grid[0].name == "even-class");
    CHECK(grid[1].name == "odd-class");
    for (const auto& r : grid) CHECK(r.pass == (r.abs_diff <= r.tol));
    auto bad = class_identity_grid({1.0}, {1.1}, 1e-7, kDefault);
    CHECK_FALSE(bad[0].pass);
    CHECK(bad[0].parameters.find("error") != std::string::npos);
}

TEST_CASE("parity partition and reconstruction") {
    for (double v : {-2.0, 0.0, 1.0, 2.5})
        for (double x : {1.2, 2.0, 10.0}) {
            auto r = parity_partition(v, x, 1e-10, kDefault);
            REQUIRE(r.pass);
            // sum_{n>=1} mu(n) n^{-v} Li_v(x^{-n}) = 1/x.
            double closed = 1.0 / x - polylog(v, 1.0 / x, kDefault).value;
            REQUIRE(std::abs(r.rhs - closed) <= 1e-10 * std::fmax(1.0, std::abs(closed)));
        }
    for (double v : {-1.0, 0.0, 2.0, 3.5})
        for (double z : {0.1, 0.5, 0.8}) REQUIRE(mobius_reconstruction(v, z, 1e-10, kDefault).pass);
}

TEST_CASE("identity domain") {
    CHECK_THROWS_AS(mobius_even_polylog_sum(2, 1.12, kDefault), DomainError);
    CHECK_THROWS_AS(mobius_even_polylog_sum(2, std::pow(2.0, 1.0 / 6.0) + 5e-4, kDefault), DomainError);
    CHECK_NOTHROW(mobius_even_polylog_sum(2, std::pow(2.0, 1.0 / 6.0) + 2e-3, kDefault));
    CHECK_THROWS_AS(non_divisor_polylog_sum(NAN, 2, kDefault), DomainError);
    CHECK_THROWS_AS(mobius_reconstruction(1, 1.0, 1e-10, kDefault), DomainError);
}

TEST_CASE("non-divisor symmetry of self-covariances") {
    for (double sigma : {0.3, 0.5, 1.0, 2.0})
        for (std::int64_t M : {1, 2, 6}) {
            INFO("sigma = " << sigma << ", M = " << M);
            REQUIRE(non_divisor_symmetry(sigma, PrincipalCharacter(M), 1e-8, kDefault).pass);
            REQUIRE(non_divisor_symmetry(sigma, PrincipalCharacter(M), 1e-9, kDefault, kReduced).pass);
        }
    // The symmetry is half the gap between the two mean-square forms.
    PrincipalCharacter one(1);
    auto r = non_divisor_symmetry(0.3, one, 1e-8, kDefault);
    double gap = mse_expanded(0.3, one, kDefault).value - mse_simple(0.3, one, kDefault).value;
    CHECK(std::abs((r.rhs - r.lhs) - gap / 2) <= 1e-9);
    CHECK_THROWS_AS(non_divisor_symmetry(0.25, one, 1e-8, kDefault), DomainError);
}

TEST_CASE("removing one Euler factor") {
    auto a = euler_factor_removal(2, 1.0, 1, 2, 1e-10, kTight);
    CHECK(a.pass);
    CHECK(std::abs(a.rhs - 0.5 * li_oracle(2, 1.0 / 16)) <= 1e-15);
    CHECK(euler_factor_removal(3, 1.0, 2, 3, 1e-10, kDefault).pass);
    auto c = euler_factor_removal(1, 0.6, 1, 5, 1e-10, kTight);
    CHECK(c.pass);
    CHECK(std::abs(c.rhs - 0.5 * li_oracle(2, std::pow(5.0, -1.2))) <= 1e-14);
    CHECK_THROWS_AS(euler_factor_removal(2, 1.0, 6, 3, 1e-10, kDefault), PreconditionError);
    CHECK_THROWS_AS(euler_factor_removal(2, 1.0, 1, 4, 1e-10, kDefault), PreconditionError);
    CHECK_THROWS_AS(euler_factor_removal(2, 0.25, 1, 3, 1e-10, kDefault), DomainError);
}

TEST_CASE("polylog order shifts") {
    auto a = polylog_order_shift(1, 2, 1, kDefault);
    CHECK(a.integral.pass);
    CHECK(std::abs(a.integral.rhs - li_oracle(2, 0.5)) <= 1e-12);
    CHECK(a.derivative.pass);
    auto b = polylog_order_shift(0, 2, 2, kDefault);
    CHECK(b.derivative.pass);
    CHECK(b.derivative.abs_diff <= 1e-6);
    auto c = polylog_order_shift(2, 10, 3, kDefault);
    CHECK(c.integral.pass);
    CHECK(c.derivative.pass);
    for (double v : {-1.0, 0.5, 3.0}) CHECK(polylog_order_shift(v, 1.3, 2, kDefault).integral.pass);
    CHECK_THROWS_AS(polylog_order_shift(1, 1.0, 1, kDefault), DomainError);
    CHECK_THROWS_AS(polylog_order_shift(1, 2, 0, kDefault), DomainError);
}

TEST_CASE("report bookkeeping") {
    auto r = make_report("n", "p", 1.0, 1.5, 0.5);
    CHECK(r.pass);
    CHECK(r.abs_diff == 0.5);
    CHECK_FALSE(make_report("n", "p", 1.0, 1.5, 0.49).pass);
}
