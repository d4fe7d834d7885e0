#pragma once

#include <cstdint>

namespace lcorr {

/// Knobs shared by every truncated series in the library.
///
/// A series evaluator either returns a value whose discarded tail is bounded by
/// `abs_tol`, or throws PrecisionError. Bounds cover truncation only; floating
/// point rounding is not part of the certificate.
struct TruncationPolicy {
    std::int64_t prime_limit = 1'000'000;  ///< direct prime sums stop here
    std::int64_t term_limit = 10'000;      ///< cap on k-indexed series length
    double abs_tol = 1e-10;                ///< target bound on the discarded tail
    double singular_radius = 1e-6;         ///< exclusion radius around poles

    /// Throws DomainError when a field is out of range.
    void validate() const;

    /// Same limits with a tighter tolerance, for sub-evaluations feeding a sum.
    TruncationPolicy with_tol(double tol) const {
        TruncationPolicy p = *this;
        p.abs_tol = tol;
        return p;
    }
};

/// A truncated-series value with the bound on what was dropped.
struct Estimate {
    double value = 0.0;
    double error_bound = 0.0;
    std::int64_t terms = 0;
};

/// Neumaier's compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        double t = sum_ + x;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace lcorr
