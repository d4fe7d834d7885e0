#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lcorr {

/// Exact rational number p/q kept in lowest terms with q > 0.
///
/// Used wherever the divisibility of one rational by another matters, so the
/// classification never passes through floating point.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_integer() const noexcept { return den_ == 1; }
    bool is_positive() const noexcept { return num_ > 0; }

    /// "p/q" when q > 1, "p" otherwise.
    std::string str() const;

    /// Accepts "p/q", "p", and finite decimals such as "0.75" or "-1.5".
    /// Decimals are converted exactly (0.75 -> 3/4). Exponent notation is rejected.
    static Rational parse(std::string_view text);

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// True when numerator / divisor is a positive integer (the "divisor | numerator"
/// relation extended to positive rationals).
bool divides(const Rational& divisor, const Rational& numerator);

}  // namespace lcorr
