#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lcorr {

/// All primes <= limit, ascending. Throws EmptyDomainError for limit < 2.
std::vector<std::int64_t> sieve_primes(std::int64_t limit);

/// mu(n) for 1 <= n <= limit, filled by a linear sieve.
class MobiusTable {
public:
    explicit MobiusTable(std::int64_t limit);

    std::int64_t limit() const noexcept { return limit_; }
    /// mu(n); n must lie in [1, limit].
    int operator()(std::int64_t n) const;
    /// values()[n] == mu(n); index 0 is unused and holds 0.
    std::span<const std::int8_t> values() const noexcept { return values_; }

private:
    std::int64_t limit_;
    std::vector<std::int8_t> values_;
};

MobiusTable mobius_table(std::int64_t limit);

/// mu(n) by trial division, for arguments beyond any precomputed table.
int mobius(std::int64_t n);

/// Principal Dirichlet character chi_0 modulo M.
class PrincipalCharacter {
public:
    /// Throws InvalidModulusError for M < 1.
    explicit PrincipalCharacter(std::int64_t modulus = 1);

    std::int64_t modulus() const noexcept { return modulus_; }
    /// Distinct primes dividing M, ascending; empty when M = 1.
    const std::vector<std::int64_t>& prime_factors() const noexcept { return prime_factors_; }

    bool excludes(std::int64_t p) const noexcept { return modulus_ % p == 0; }
    /// chi_0(n): 1 when gcd(n, M) = 1, else 0.
    int operator()(std::int64_t n) const noexcept;

    friend bool operator==(const PrincipalCharacter& a, const PrincipalCharacter& b) noexcept {
        return a.modulus_ == b.modulus_;
    }

private:
    std::int64_t modulus_;
    std::vector<std::int64_t> prime_factors_;
};

PrincipalCharacter principal_character(std::int64_t modulus);

/// Least prime that does not divide the modulus.
std::int64_t smallest_excluded_prime(const PrincipalCharacter& chi);

/// { m : 1 <= m < n, m does not divide n }, ascending.
std::vector<std::int64_t> non_divisors_below(std::int64_t n);

/// Immutable sieve output shared across evaluators.
struct PrimeTable {
    std::int64_t limit = 0;
    std::vector<std::int64_t> primes;
};

/// Process-wide cache of prime tables keyed by limit. Thread-safe; the returned
/// table is immutable.
std::shared_ptr<const PrimeTable> shared_prime_table(std::int64_t limit);

}  // namespace lcorr
