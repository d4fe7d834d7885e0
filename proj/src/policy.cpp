#include "lcorr/policy.hpp"

#include "lcorr/errors.hpp"

namespace lcorr {

void TruncationPolicy::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    if (prime_limit < 2) throw DomainError("prime_limit must be at least 2");
    if (term_limit < 1) throw DomainError("term_limit must be at least 1");
    if (!(singular_radius > 0.0)) throw DomainError("singular_radius must be positive");
}

}  // namespace lcorr
