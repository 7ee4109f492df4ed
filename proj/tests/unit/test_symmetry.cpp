#include <doctest.h>

#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/symmetry.hpp"
#include "tempus/systems.hpp"

using namespace tempus;

namespace {

// Two-sided trajectory around t = 0 with the initial state in the middle.
Trajectory two_sided(const DynamicalSystem& sys, const PhaseState& ic, double span,
                     double step) {
    auto back = integrate(sys, ic, ic.t - span, step);
    auto fwd = integrate(sys, ic, ic.t + span, step);
    Trajectory both;
    both.step = fwd.step;
    both.integrator_id = fwd.integrator_id;
    for (auto it = back.states.rbegin(); it != back.states.rend(); ++it)
        both.states.push_back(*it);
    for (std::size_t i = 1; i < fwd.states.size(); ++i) both.states.push_back(fwd.states[i]);
    return both;
}

}  // namespace

TEST_SUITE("symmetry") {

TEST_CASE("TRI verdicts for the four reference systems") {
    CHECK(check_time_reversal_invariance(harmonic_oscillator(), 64, 11));
    CHECK(check_time_reversal_invariance(pendulum(), 64, 12));
    CHECK_FALSE(check_time_reversal_invariance(modified_oscillator(1.0, 2.0), 64, 13));
    CHECK_FALSE(check_time_reversal_invariance(damped_oscillator(), 64, 14));
}

TEST_CASE("TRI decision is seed-independent") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 999ull, 31337ull}) {
        CHECK(check_time_reversal_invariance(pendulum(), 32, seed));
        CHECK_FALSE(check_time_reversal_invariance(damped_oscillator(), 32, seed));
    }
}

TEST_CASE("harmonic orbit is reversible with the right period") {
    auto sys = harmonic_oscillator();
    auto traj = integrate(sys, PhaseState{{1.0}, {0.0}, 0.0}, 8.0 * M_PI, 1e-3);
    auto rep = check_reversibility(traj, sys, 1e-4, 8.0);
    REQUIRE(rep.verdict == Reversibility::Reversible);
    CHECK(*rep.period == doctest::Approx(2.0 * M_PI).epsilon(1e-4));
}

TEST_CASE("pendulum inside the separatrix is reversible, above it is not") {
    auto sys = pendulum(1.0);
    auto launch = [](double energy) {
        return PhaseState{{M_PI}, {std::sqrt(2.0 * (energy + 0.5))}, 0.0};
    };
    auto inside = integrate(sys, launch(0.9 * 0.5), 50.0, 1e-3);
    CHECK(check_reversibility(inside, sys, 1e-4, 50.0).verdict ==
          Reversibility::Reversible);

    auto above = integrate(sys, launch(1.2 * 0.5), 50.0, 1e-3);
    CHECK(check_reversibility(above, sys, 1e-4, 50.0).verdict ==
          Reversibility::Irreversible);
}

TEST_CASE("near-separatrix orbit on a short horizon stays undetermined") {
    auto sys = pendulum(1.0);
    PhaseState ic{{M_PI}, {std::sqrt(2.0 * (0.9995 * 0.5 + 0.5))}, 0.0};
    auto traj = integrate(sys, ic, 20.0, 1e-3);
    CHECK(check_reversibility(traj, sys, 1e-4, 20.0).verdict ==
          Reversibility::Undetermined);
}

TEST_CASE("damped spiral converges to the attractor") {
    auto sys = damped_oscillator();
    auto traj = integrate(sys, PhaseState{{1.0}, {0.0}, 0.0}, 50.0, 1e-3);
    auto rep = check_reversibility(traj, sys, 1e-4, 50.0);
    CHECK(rep.verdict == Reversibility::Irreversible);
}

TEST_CASE("modified oscillator closes every orbit despite broken TRI") {
    auto sys = modified_oscillator(1.0, 2.0);
    for (double q0 : {0.5, 1.0, 1.7}) {
        auto traj = integrate(sys, PhaseState{{q0}, {0.0}, 0.0}, 20.0, 1e-3);
        CHECK(check_reversibility(traj, sys, 1e-4, 20.0).verdict ==
              Reversibility::Reversible);
    }
}

TEST_CASE("harmonic symmetry center sits at the turning point") {
    auto sys = harmonic_oscillator();
    auto traj = two_sided(sys, PhaseState{{1.0}, {0.0}, 0.0}, 2.0 * M_PI, 1e-3);
    auto sym = find_time_symmetry(traj, 1e-6);
    REQUIRE(sym.has_value());
    CHECK(std::abs(sym->t_s) < 1e-6);
    CHECK(sym->residual <= 1e-6);
}

TEST_CASE("damped oscillator has no symmetry center") {
    auto sys = damped_oscillator();
    auto traj = two_sided(sys, PhaseState{{1.0}, {0.0}, 0.0}, 10.0, 1e-3);
    CHECK_FALSE(find_time_symmetry(traj, 1e-4).has_value());
}

TEST_CASE("symmetry detection commutes with time reversal") {
    auto sys = harmonic_oscillator();
    auto traj = two_sided(sys, PhaseState{{0.3}, {0.9}, 0.0}, 7.0, 1e-3);
    auto sym = find_time_symmetry(traj, 1e-5);
    REQUIRE(sym.has_value());
    auto rev = time_reverse(traj, sys);
    auto sym_rev = find_time_symmetry(rev, 1e-5);
    REQUIRE(sym_rev.has_value());
    double reflected = traj.t_begin() + traj.t_end() - sym->t_s;
    CHECK(sym_rev->t_s == doctest::Approx(reflected).epsilon(1e-6));
}

TEST_CASE("reversibility verdict matches between a TRI trajectory and its reversal") {
    auto sys = harmonic_oscillator();
    auto traj = integrate(sys, PhaseState{{1.0}, {0.0}, 0.0}, 8.0 * M_PI, 1e-3);
    auto rev = time_reverse(traj, sys);
    CHECK(check_reversibility(traj, sys, 1e-4, 8.0).verdict ==
          check_reversibility(rev, sys, 1e-4, 8.0).verdict);
}

TEST_CASE("window too short raises") {
    auto sys = harmonic_oscillator();
    auto traj = integrate(sys, PhaseState{{1.0}, {0.0}, 0.0}, 0.02, 1e-3);
    CHECK_THROWS_AS(find_time_symmetry(traj, 1e-6), WindowTooShort);
}

TEST_CASE("catalog reproduces the four-system taxonomy") {
    auto catalog = classify_catalog();
    REQUIRE(catalog.size() == 4);

    CHECK(catalog[0].system == "a");
    CHECK(catalog[0].tri);
    CHECK(catalog[0].trajectories[0].report.verdict == Reversibility::Reversible);
    REQUIRE(catalog[0].t_symmetry.has_value());
    CHECK(std::abs(*catalog[0].t_symmetry) < 1e-5);

    CHECK(catalog[1].system == "b");
    CHECK(catalog[1].tri);
    CHECK(catalog[1].trajectories[0].report.verdict == Reversibility::Reversible);
    CHECK(catalog[1].trajectories[1].report.verdict == Reversibility::Irreversible);

    CHECK(catalog[2].system == "c");
    CHECK_FALSE(catalog[2].tri);
    CHECK(catalog[2].trajectories[0].report.verdict == Reversibility::Reversible);

    CHECK(catalog[3].system == "d");
    CHECK_FALSE(catalog[3].tri);
    CHECK(catalog[3].trajectories[0].report.verdict == Reversibility::Irreversible);
}

}  // TEST_SUITE
