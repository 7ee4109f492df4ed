#include <doctest.h>

#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/rng.hpp"
#include "tempus/schulman.hpp"

using namespace tempus;
using namespace tempus::branch;

TEST_SUITE("schulman") {

TEST_CASE("pair invariants are enforced") {
    UrnPair pair;
    pair.lambda = 0.2;  // beyond the weak-coupling bound
    CHECK_THROWS_AS(pair.validate(), InvalidArgument);
    pair.lambda = 0.01;
    pair.n_b = 4;
    CHECK_THROWS_AS(pair.validate(), InvalidArgument);
}

TEST_CASE("identical seeds reproduce identical series") {
    UrnPair pair;
    auto a = schulman_sim(pair, 2000, 7, Scenario::AsymmetricSizes);
    auto b = schulman_sim(pair, 2000, 7, Scenario::AsymmetricSizes);
    CHECK(a.s_composite == b.s_composite);
}

TEST_CASE("entropy stays below the equilibrium ceiling") {
    UrnPair pair;
    auto res = schulman_sim(pair, 5000, 11, Scenario::AsymmetricSizes);
    double cap_a = urn_equilibrium_entropy(pair.n_a);
    double cap_b = urn_equilibrium_entropy(pair.n_b);
    for (double s : res.s_a) CHECK(s <= cap_a + 1e-12);
    for (double s : res.s_b) CHECK(s <= cap_b + 1e-12);
    // A starts in the all-one-urn macrostate with zero entropy.
    CHECK(res.s_a.front() == doctest::Approx(0.0));
}

TEST_CASE("asymmetric runs relax and the coupling displaces B") {
    UrnPair pair;  // N_A = 200, N_B = 20, lambda = 0.01
    std::size_t monotone = 0, displaced = 0;
    const std::size_t runs = 10;
    for (std::size_t r = 0; r < runs; ++r) {
        auto res = schulman_sim(pair, 20'000, derive_seed(123, r),
                                Scenario::AsymmetricSizes);
        monotone += res.composite_monotone ? 1 : 0;
        displaced += res.displacement_detected ? 1 : 0;
    }
    CHECK(monotone >= 9);
    CHECK(displaced >= 9);
}

TEST_CASE("decoupled B shows no displacement") {
    UrnPair pair;
    pair.lambda = 0.0;
    auto res = schulman_sim(pair, 20'000, 5, Scenario::AsymmetricSizes);
    CHECK_FALSE(res.displacement_detected);
}

TEST_CASE("mirror scenario is symmetric for identical halves") {
    UrnPair pair;
    pair.n_a = 100;
    pair.n_b = 100;
    auto res = schulman_sim(pair, 20'000, 31, Scenario::Mirror);
    CHECK(res.mirror_symmetric);
    // The reversed B series ends where its forward copy started: at zero
    // entropy, like A begins.
    CHECK(res.s_b.back() == doctest::Approx(0.0));
    CHECK(res.s_a.front() == doctest::Approx(0.0));
}

TEST_CASE("structural asymmetry breaks the mirror test") {
    UrnPair pair;
    pair.n_a = 100;
    pair.n_b = 60;
    auto res = schulman_sim(pair, 20'000, 31, Scenario::Mirror);
    CHECK_FALSE(res.mirror_symmetric);
}

TEST_CASE("mirror pass rate stays high across seeds") {
    UrnPair pair;
    pair.n_a = 100;
    pair.n_b = 100;
    std::size_t passes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto res = schulman_sim(pair, 10'000, derive_seed(777, seed), Scenario::Mirror);
        passes += res.mirror_symmetric ? 1 : 0;
    }
    CHECK(passes >= 18);
}

}  // TEST_SUITE
