#include "lcorr/arith.hpp"
#include "lcorr/errors.hpp"
#include "lcorr/rational.hpp"

#include <doctest.h>

#include <numeric>
#include <vector>

using namespace lcorr;

namespace {

bool trial_division_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t divisor_count(std::int64_t n) {
    std::int64_t c = 0;
    for (std::int64_t d = 1; d <= n; ++d)
        if (n % d == 0) ++c;
    return c;
}

}  // namespace

TEST_CASE("sieve_primes small cases") {
    CHECK(sieve_primes(10) == std::vector<std::int64_t>{2, 3, 5, 7});
    CHECK(sieve_primes(2) == std::vector<std::int64_t>{2});
    CHECK_THROWS_AS(sieve_primes(1), EmptyDomainError);
    CHECK_THROWS_AS(sieve_primes(-5), EmptyDomainError);
}

TEST_CASE("sieve_primes agrees with trial division") {
    auto primes = sieve_primes(100);
    CHECK(primes.size() == 25);
    std::vector<std::int64_t> oracle;
    for (std::int64_t n = 2; n <= 5000; ++n)
        if (trial_division_prime(n)) oracle.push_back(n);
    CHECK(sieve_primes(5000) == oracle);
}

TEST_CASE("mobius table values") {
    auto mu = mobius_table(12);
    std::vector<int> first{1, -1, -1, 0, -1, 1};
    for (int n = 1; n <= 6; ++n) CHECK(mu(n) == first[n - 1]);
    CHECK(mu(12) == 0);
    CHECK_THROWS_AS(mu(13), DomainError);
    CHECK_THROWS_AS(mu(0), DomainError);
    CHECK(mu.values()[0] == 0);
}

TEST_CASE("mobius sums over divisors vanish") {
    constexpr std::int64_t limit = 10'000;
    auto mu = mobius_table(limit);
    for (std::int64_t n = 2; n <= limit; ++n) {
        int s = 0;
        for (std::int64_t d = 1; d <= n; ++d)
            if (n % d == 0) s += mu(d);
        REQUIRE(s == 0);
    }
}

TEST_CASE("mobius is multiplicative on coprime pairs and matches trial division") {
    constexpr std::int64_t limit = 1000;
    auto mu = mobius_table(limit * limit);
    for (std::int64_t n = 1; n <= limit; n += 7)
        for (std::int64_t m = 1; m <= limit; m += 3) {
            if (std::gcd(n, m) != 1) continue;
            REQUIRE(mu(n * m) == mu(n) * mu(m));
        }
    for (std::int64_t n = 1; n <= 20'000; ++n) REQUIRE(mobius(n) == mu(n));
}

TEST_CASE("principal character factorization") {
    CHECK(principal_character(1).prime_factors().empty());
    CHECK(principal_character(6).prime_factors() == std::vector<std::int64_t>{2, 3});
    CHECK(principal_character(12).prime_factors() == std::vector<std::int64_t>{2, 3});
    CHECK(principal_character(97).prime_factors() == std::vector<std::int64_t>{97});
    CHECK_THROWS_AS(principal_character(0), InvalidModulusError);
    CHECK_THROWS_AS(principal_character(-3), InvalidModulusError);

    auto chi = principal_character(12);
    CHECK(chi(5) == 1);
    CHECK(chi(9) == 0);
    CHECK(chi(1) == 1);
    for (std::int64_t M = 1; M <= 500; ++M) {
        auto c = principal_character(M);
        const auto& f = c.prime_factors();
        REQUIRE(std::is_sorted(f.begin(), f.end()));
        REQUIRE(std::adjacent_find(f.begin(), f.end()) == f.end());
        for (std::int64_t p : f) REQUIRE(M % p == 0);
        std::int64_t rad = 1;
        for (std::int64_t p : f) rad *= p;
        // Every prime dividing M is listed: M / rad has no prime outside the list.
        std::int64_t rest = M;
        for (std::int64_t p : f)
            while (rest % p == 0) rest /= p;
        REQUIRE(rest == 1);
    }
}

TEST_CASE("smallest excluded prime") {
    CHECK(smallest_excluded_prime(principal_character(1)) == 2);
    CHECK(smallest_excluded_prime(principal_character(6)) == 5);
    CHECK(smallest_excluded_prime(principal_character(30)) == 7);
    for (std::int64_t M = 1; M <= 3000; ++M) {
        auto chi = principal_character(M);
        std::int64_t p = smallest_excluded_prime(chi);
        REQUIRE(trial_division_prime(p));
        REQUIRE(M % p != 0);
        for (std::int64_t q = 2; q < p; ++q)
            if (trial_division_prime(q)) REQUIRE(M % q == 0);
    }
}

TEST_CASE("non-divisors below n") {
    CHECK(non_divisors_below(1).empty());
    CHECK(non_divisors_below(2).empty());
    CHECK(non_divisors_below(6) == std::vector<std::int64_t>{4, 5});
    CHECK(non_divisors_below(12) == std::vector<std::int64_t>{5, 7, 8, 9, 10, 11});
    for (std::int64_t n = 1; n <= 10'000; n += (n < 300 ? 1 : 37))
        REQUIRE(static_cast<std::int64_t>(non_divisors_below(n).size()) == (n - 1) - (divisor_count(n) - 1));
}

TEST_CASE("shared prime tables are cached") {
    auto a = shared_prime_table(1000);
    auto b = shared_prime_table(1000);
    CHECK(a.get() == b.get());
    CHECK(a->primes.size() == 168);
}

TEST_CASE("rational parsing and divisibility") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("0.75") == Rational(3, 4));
    CHECK(Rational::parse("-6/4") == Rational(-3, 2));
    CHECK(Rational::parse("40").is_integer());
    CHECK(Rational::parse("1.5").str() == "3/2");
    CHECK_THROWS_AS(Rational::parse("1e3"), ParseError);
    CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
    CHECK_THROWS_AS(Rational::parse(""), ParseError);

    CHECK(divides(Rational(2), Rational(40)));
    CHECK_FALSE(divides(Rational(3), Rational(40)));
    CHECK(divides(Rational(1, 2), Rational(3, 2)));
    CHECK_FALSE(divides(Rational(3, 2), Rational(2)));
    CHECK(divides(Rational(3, 4), Rational(3, 2)));
    CHECK_FALSE(divides(Rational(2), Rational(-4)));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
}
