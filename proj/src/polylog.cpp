#include "lcorr/errors.hpp"
#include "lcorr/special_fns.hpp"

#include <cmath>
#include <string>

namespace lcorr {

Estimate polylog(double v, double z, const TruncationPolicy& policy) {
    if (!std::isfinite(v)) throw DomainError("polylog order must be finite");
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("polylog argument must lie in [0, 1), got " + std::to_string(z));
    if (z == 0.0) return {0.0, 0.0, 0};
    if (v == 1.0) return {-std::log1p(-z), 0.0, 0};
    if (v == 0.0) return {z / (1.0 - z), 0.0, 0};

    CompensatedSum sum;
    double zk = 1.0;
    for (std::int64_t k = 1; k <= policy.term_limit; ++k) {
        zk *= z;
        sum += zk * std::pow(static_cast<double>(k), -v);
        // Terms from k+1 on shrink at least by rho each step.
        double kp1 = static_cast<double>(k + 1);
        double next = zk * z * std::pow(kp1, -v);
        double rho = z * std::fmax(1.0, std::pow((kp1 + 1.0) / kp1, -v));
        if (rho < 1.0) {
            double tail = next / (1.0 - rho);
            if (tail <= policy.abs_tol) return {sum.value(), tail, k};
        }
    }
    throw PrecisionError("polylog(" + std::to_string(v) + ", " + std::to_string(z) + ") needs more than " +
                         std::to_string(policy.term_limit) + " terms");
}

double li2_small(double y) noexcept {
    double sum = 0.0;
    double yk = 1.0;
    for (int k = 1; k < 400; ++k) {
        yk *= y;
        double term = yk / (static_cast<double>(k) * k);
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    return sum;
}

}  // namespace lcorr
