#include "lcorr/arith.hpp"

#include "lcorr/errors.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace lcorr {

namespace {

// Desk-scale bound for sieves; beyond this a table would not fit comfortably in memory.
constexpr std::int64_t kMaxSieveLimit = 2'000'000'000;

void check_sieve_limit(std::int64_t limit) {
    if (limit > kMaxSieveLimit) throw DomainError("sieve limit " + std::to_string(limit) + " is too large");
}

}  // namespace

std::vector<std::int64_t> sieve_primes(std::int64_t limit) {
    if (limit < 2) throw EmptyDomainError("sieve_primes needs limit >= 2, got " + std::to_string(limit));
    check_sieve_limit(limit);
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::int64_t> primes;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

MobiusTable::MobiusTable(std::int64_t limit) : limit_(limit) {
    if (limit < 1) throw EmptyDomainError("mobius_table needs limit >= 1");
    check_sieve_limit(limit);
    values_.assign(static_cast<std::size_t>(limit) + 1, 0);
    values_[1] = 1;
    // Linear sieve: every composite is struck exactly once by its least prime factor.
    std::vector<std::int64_t> primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            values_[i] = -1;
        }
        for (std::int64_t p : primes) {
            std::int64_t m = i * p;
            if (m > limit) break;
            composite[m] = true;
            if (i % p == 0) {
                values_[m] = 0;
                break;
            }
            values_[m] = static_cast<std::int8_t>(-values_[i]);
        }
    }
}

int MobiusTable::operator()(std::int64_t n) const {
    if (n < 1 || n > limit_) throw DomainError("mobius index " + std::to_string(n) + " outside table");
    return values_[static_cast<std::size_t>(n)];
}

MobiusTable mobius_table(std::int64_t limit) { return MobiusTable(limit); }

int mobius(std::int64_t n) {
    if (n < 1) throw DomainError("mobius needs n >= 1");
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

PrincipalCharacter::PrincipalCharacter(std::int64_t modulus) : modulus_(modulus) {
    if (modulus < 1) throw InvalidModulusError("modulus must be a positive integer, got " + std::to_string(modulus));
    std::int64_t n = modulus;
    for (std::int64_t p = 2; p <= n / p; ++p) {
        if (n % p != 0) continue;
        prime_factors_.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) prime_factors_.push_back(n);
}

int PrincipalCharacter::operator()(std::int64_t n) const noexcept {
    return std::gcd(n, modulus_) == 1 ? 1 : 0;
}

PrincipalCharacter principal_character(std::int64_t modulus) { return PrincipalCharacter(modulus); }

std::int64_t smallest_excluded_prime(const PrincipalCharacter& chi) {
    std::int64_t candidate = 2;
    for (;;) {
        bool is_prime = true;
        for (std::int64_t d = 2; d * d <= candidate; ++d)
            if (candidate % d == 0) {
                is_prime = false;
                break;
            }
        if (is_prime && !chi.excludes(candidate)) return candidate;
        ++candidate;
    }
}

std::vector<std::int64_t> non_divisors_below(std::int64_t n) {
    if (n < 1) throw DomainError("non_divisors_below needs n >= 1");
    std::vector<std::int64_t> out;
    for (std::int64_t m = 2; m < n; ++m)
        if (n % m != 0) out.push_back(m);
    return out;
}

std::shared_ptr<const PrimeTable> shared_prime_table(std::int64_t limit) {
    static std::mutex mutex;
    static std::map<std::int64_t, std::shared_ptr<const PrimeTable>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(limit);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<PrimeTable>();
    table->limit = limit;
    table->primes = sieve_primes(limit);
    cache.emplace(limit, table);
    return table;
}

}  // namespace lcorr
