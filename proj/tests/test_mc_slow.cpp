#include "lcorr/mc.hpp"

#include <doctest.h>

using namespace lcorr;

TEST_CASE("resonant vertical correlation is visibly larger than its dissonant neighbour") {
    SamplingPlan plan;
    plan.n_samples = 50'000;
    plan.seed = 2024;
    const PrincipalCharacter one(1);
    auto c = contrast_corr({CorrelationKind::vert, 4, 2, 1.0, one}, {CorrelationKind::vert, 5, 2, 1.0, one}, plan,
                           TruncationPolicy{});
    MESSAGE("rho(4,2) = " << c.first.value << ", rho(5,2) = " << c.second.value << ", z = " << c.z_score);
    CHECK(c.first.value > c.second.value);
    CHECK(c.z_score >= 2.0);
}
