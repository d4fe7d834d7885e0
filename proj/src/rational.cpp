#include "lcorr/rational.hpp"

#include "lcorr/errors.hpp"

#include <cctype>
#include <limits>
#include <numeric>

namespace lcorr {

namespace {

__extension__ typedef __int128 Wide;

Wide gcd_wide(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide r = a % b;
        a = b;
        b = r;
    }
    return a;
}

Rational make_reduced(Wide num, Wide den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr Wide lo = std::numeric_limits<std::int64_t>::min();
    constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) throw DomainError("rational overflows 64-bit range");
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min())
            throw DomainError("rational overflows 64-bit range");
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] { throw ParseError("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) fail();

    auto parse_int = [&](std::string_view s, bool allow_sign) -> Wide {
        bool negative = false;
        if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) {
            negative = s.front() == '-';
            s.remove_prefix(1);
        }
        if (s.empty()) fail();
        Wide v = 0;
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
            v = v * 10 + (c - '0');
            if (v > Wide(std::numeric_limits<std::int64_t>::max())) fail();
        }
        return negative ? -v : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Wide num = parse_int(text.substr(0, slash), true);
        Wide den = parse_int(text.substr(slash + 1), false);
        if (den == 0) fail();
        return make_reduced(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        bool negative = !int_part.empty() && int_part.front() == '-';
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
        if (int_part.empty() && frac_part.empty()) fail();
        if (frac_part.size() > 18) fail();
        Wide ip = int_part.empty() ? 0 : parse_int(int_part, false);
        Wide fp = frac_part.empty() ? 0 : parse_int(frac_part, false);
        Wide scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        Wide num = ip * scale + fp;
        return make_reduced(negative ? -num : num, scale);
    }
    return make_reduced(parse_int(text, true), 1);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("division by zero rational");
    return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    Wide lhs = Wide(a.num_) * b.den_;
    Wide rhs = Wide(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool divides(const Rational& divisor, const Rational& numerator) {
    if (!divisor.is_positive() || !numerator.is_positive()) return false;
    // numerator / divisor = (a.num * d.den) / (a.den * d.num)
    Wide top = Wide(numerator.num()) * divisor.den();
    Wide bottom = Wide(numerator.den()) * divisor.num();
    return top % bottom == 0;
}

}  // namespace lcorr
