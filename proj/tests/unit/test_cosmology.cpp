#include <doctest.h>

#include <cmath>

#include "tempus/cosmology.hpp"
#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/symmetry.hpp"

using namespace tempus;
using namespace tempus::cosmo;

namespace {

FRWModel closed_model(double m = 1.0) {
    FRWModel model;
    model.k = 1;
    model.field_mass = m;
    return model;
}

}  // namespace

TEST_SUITE("cosmology") {

TEST_CASE("constraint residual vanishes on constructed states") {
    auto model = closed_model();
    CosmoState s;
    s.phi = 0.5;
    s.a = solve_constraint_for_a(0.0, s.phi, 0.0, model).a;
    CHECK(std::abs(constraint_residual(s, model)) < 1e-12);
}

TEST_CASE("empty expanding flat universe is maximally violated") {
    FRWModel model;
    model.k = 0;
    model.field_mass = 1.0;
    CosmoState s;
    s.a = 1.0;
    s.a_dot = 0.7;
    CHECK(constraint_residual(s, model) == doctest::Approx(1.0));
}

TEST_CASE("de Sitter state satisfies the constraint identically") {
    FRWModel model;
    model.k = 0;
    const double hubble = 0.7;
    model.potential = [hubble](double) { return hubble * hubble; };  // kappa = 1
    model.potential_prime = [](double) { return 0.0; };
    CosmoState s;
    s.a = 1.3;
    s.a_dot = hubble * s.a;
    CHECK(std::abs(constraint_residual(s, model)) < 1e-12);
}

TEST_CASE("constraint root at the closed-universe turning point") {
    // adot = 0, k = 1: a = 1/sqrt(kappa V(phi)).
    auto model = closed_model(1.0);
    double phi0 = 0.5;
    auto root = solve_constraint_for_a(0.0, phi0, 0.0, model);
    CHECK(root.a == doctest::Approx(1.0 / std::sqrt(0.5 * phi0 * phi0)).epsilon(1e-12));
    CHECK(root.multiplicity == 1);

    // Axis (0, 0, c): rho = c^2/2.
    double c = 0.3;
    auto root2 = solve_constraint_for_a(0.0, 0.0, c, model);
    CHECK(root2.a == doctest::Approx(1.0 / std::sqrt(0.5 * c * c)).epsilon(1e-12));
}

TEST_CASE("zero-energy closed universe has no physical root") {
    auto model = closed_model();
    CHECK_THROWS_AS(solve_constraint_for_a(0.0, 0.0, 0.0, model), NoPhysicalRoot);
}

TEST_CASE("singular state is rejected") {
    auto model = closed_model();
    CosmoState s;
    s.a = 0.0;
    CHECK_THROWS_AS(constraint_residual(s, model), SingularState);
}

TEST_CASE("evolution rejects constraint-violating initial data") {
    auto model = closed_model();
    CosmoState s;
    s.a = 1.0;
    s.a_dot = 0.9;
    s.phi = 0.1;
    CHECK_THROWS_AS(evolve_cosmo(s, model, 1.0, {}), InvalidArgument);
}

TEST_CASE("tight drift limit trips ConstraintDrift") {
    auto model = closed_model();
    CosmoState s;
    s.phi = 0.4;
    s.a = solve_constraint_for_a(0.0, s.phi, 0.0, model).a;
    EvolveOptions opts;
    opts.drift_limit = 1e-18;
    CHECK_THROWS_AS(evolve_cosmo(s, model, 2.0, opts), ConstraintDrift);
}

TEST_CASE("even axis data evolves time-symmetrically") {
    auto model = closed_model(1.0);
    CosmoState ic;
    ic.phi = 0.3;
    ic.a = solve_constraint_for_a(0.0, ic.phi, 0.0, model).a;
    auto run = evolve_two_sided(ic, model, 6.0, 6.0, {});
    CHECK(run.max_residual <= 1e-6);

    auto sym = detect_cosmo_symmetry(run, 1e-4);
    REQUIRE(sym.has_value());
    CHECK(sym->parity == Parity::Even);
    CHECK(std::abs(sym->t_s) < 1e-6);

    // Reflection closure within 1e-6 across the full window.
    static const std::vector<int> even_parity{+1, +1, -1, -1};
    CHECK(reflection_residual(run.trajectory, 0.0, even_parity) <= 1e-6);
}

TEST_CASE("odd axis data is detected with odd parity") {
    auto model = closed_model(1.0);
    CosmoState ic;
    ic.phi_dot = 0.3;
    ic.a = solve_constraint_for_a(0.0, 0.0, ic.phi_dot, model).a;
    auto run = evolve_two_sided(ic, model, 6.0, 6.0, {});
    auto sym = detect_cosmo_symmetry(run, 1e-4);
    REQUIRE(sym.has_value());
    CHECK(sym->parity == Parity::Odd);
    CHECK(std::abs(sym->t_s) < 1e-6);
}

TEST_CASE("perturbed axis data loses the symmetry") {
    auto model = closed_model(1.0);
    CosmoState ic;
    ic.phi = 0.3 + 0.05;
    ic.phi_dot = 0.05;
    ic.a = solve_constraint_for_a(0.0, ic.phi, ic.phi_dot, model).a;
    auto run = evolve_two_sided(ic, model, 6.0, 6.0, {});
    CHECK_FALSE(detect_cosmo_symmetry(run, 1e-4).has_value());
}

TEST_CASE("stiff flat universe grows like t^(1/3)") {
    // Massless field: a^3 = a0^3 + 3 B t exactly; late-time log-log slope 1/3.
    FRWModel model;
    model.k = 0;
    model.field_mass = 0.0;
    CosmoState ic;
    ic.a = 0.1;
    ic.phi_dot = 3.0;
    ic.a_dot = std::sqrt(0.5) * ic.phi_dot * ic.a;
    REQUIRE(std::abs(constraint_residual(ic, model)) < 1e-12);
    auto run = evolve_cosmo(ic, model, 50.0, {});

    std::vector<double> lt, la;
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        auto s = state_at(run, i);
        if (s.t >= 10.0) {
            lt.push_back(std::log(s.t));
            la.push_back(std::log(s.a));
        }
    }
    auto fit = linear_fit(lt, la);
    CHECK(std::abs(fit.slope - 1.0 / 3.0) < 0.01 / 3.0);  // within 1%
}

TEST_CASE("constant potential gives exponential growth at the right rate") {
    FRWModel model;
    model.k = 0;
    const double hubble = 0.5;
    model.potential = [hubble](double) { return hubble * hubble; };
    model.potential_prime = [](double) { return 0.0; };
    CosmoState ic;
    ic.a = 1.0;
    ic.a_dot = hubble;
    auto run = evolve_cosmo(ic, model, 10.0, {});
    std::vector<double> t, la;
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        auto s = state_at(run, i);
        t.push_back(s.t);
        la.push_back(std::log(s.a));
    }
    auto fit = linear_fit(t, la);
    CHECK(std::abs(fit.slope - hubble) < 1e-3 * hubble);  // within 0.1%
}

TEST_CASE("constraint is preserved along closed runs") {
    auto model = closed_model(1.0);
    CosmoState ic;
    ic.phi = 0.4;
    ic.a = solve_constraint_for_a(0.0, ic.phi, 0.0, model).a;
    auto run = evolve_cosmo(ic, model, 10.0, {});
    CHECK(run.max_residual <= 1e-6);
}

TEST_CASE("pure-radius cycloid is symmetric about its maximum") {
    // g(a) = c/a - 1: closed dust toy with cycloid solution
    // a = (c/2)(1 - cos eta), t = (c/2)(eta - sin eta).
    const double c = 2.0;
    PureFRWModel model;
    model.squared_speed = [c](double a) { return c / a - 1.0; };
    model.d_squared_speed = [c](double a) { return -c / (a * a); };
    auto rep = pure_frw_turning_symmetry(model, 1.0, 6.0, 1e-4);
    REQUIRE(rep.has_turning_point);
    CHECK(rep.generic_root);
    CHECK(rep.symmetric);
    CHECK(rep.max_residual <= 1e-8);
    CHECK(rep.a_s == doctest::Approx(2.0).epsilon(1e-6));
    // Starting from a = 1 (eta = pi/2), the turning point lies at
    // t = (pi - 0) - (pi/2 - 1) = pi/2 + 1.
    CHECK(rep.t_s == doctest::Approx(M_PI / 2.0 + 1.0).epsilon(1e-5));
}

TEST_CASE("degenerate root is flagged non-generic") {
    PureFRWModel model;
    model.squared_speed = [](double a) { return (a - 2.0) * (a - 2.0); };
    model.d_squared_speed = [](double a) { return 2.0 * (a - 2.0); };
    auto rep = pure_frw_turning_symmetry(model, 1.0, 30.0, 1e-4);
    CHECK_FALSE(rep.has_turning_point);
    CHECK_FALSE(rep.generic_root);
}

TEST_CASE("model without a root reports monotone growth") {
    PureFRWModel model;
    model.squared_speed = [](double a) { return 1.0 + a * a; };
    auto rep = pure_frw_turning_symmetry(model, 1.0, 3.0, 1e-4);
    CHECK_FALSE(rep.has_turning_point);
    CHECK(rep.monotone);
}

TEST_CASE("near-singular states diverge under perturbations") {
    auto model = closed_model(1.0);
    auto stats = big_bang_surface_instability(model, 24, 404, 1e-3, 1.0);
    CHECK(stats.positive_fraction >= 0.9);
}

TEST_CASE("instability exponent is stable under halving delta") {
    auto model = closed_model(1.0);
    auto coarse = big_bang_surface_instability(model, 24, 404, 1e-3, 1.0);
    auto fine = big_bang_surface_instability(model, 24, 404, 5e-4, 1.0);
    double scale = std::max(std::abs(coarse.mean_exponent), std::abs(fine.mean_exponent));
    CHECK(std::abs(coarse.mean_exponent - fine.mean_exponent) <= 0.2 * scale);
}

TEST_CASE("Lyapunov variable is monotone on a decelerating closed run") {
    // Massless closed universe decelerates throughout (addot < 0).
    FRWModel model;
    model.k = 1;
    model.field_mass = 0.0;
    CosmoState ic;
    ic.phi_dot = 0.5;
    ic.a = solve_constraint_for_a(0.0, 0.0, ic.phi_dot, model).a;
    auto run = evolve_two_sided(ic, model, 2.0, 2.0, {});
    auto rep = lyapunov_variable(run, model);
    CHECK(rep.premise_holds);
    CHECK(rep.monotone_nondecreasing);
    CHECK(rep.accelerating_epochs.empty());

    // L = -adot crosses zero at the turning time.
    std::size_t center = run.trajectory.size() / 2;
    CHECK(std::abs(rep.value[center]) < 1e-6);
}

TEST_CASE("accelerating de Sitter run voids the premise") {
    FRWModel model;
    model.k = 0;
    model.potential = [](double) { return 0.25; };
    model.potential_prime = [](double) { return 0.0; };
    CosmoState ic;
    ic.a = 1.0;
    ic.a_dot = 0.5;
    auto run = evolve_cosmo(ic, model, 5.0, {});
    auto rep = lyapunov_variable(run, model);
    CHECK_FALSE(rep.premise_holds);
    CHECK_FALSE(rep.accelerating_epochs.empty());
}

TEST_CASE("dominant energy condition at the boundary and under sweeps") {
    auto model = closed_model(1.0);
    CosmoState still;
    still.a = 1.0;
    still.phi = 0.7;  // V > 0, phidot = 0: P = -rho
    auto rep = dominant_energy_check(still, model);
    CHECK(rep.holds);
    CHECK(rep.margin == doctest::Approx(0.0));

    CosmoState ic;
    ic.phi = 0.4;
    ic.a = solve_constraint_for_a(0.0, ic.phi, 0.0, model).a;
    auto run = evolve_cosmo(ic, model, 8.0, {});
    for (std::size_t i = 0; i < run.trajectory.size(); ++i)
        CHECK(dominant_energy_check(state_at(run, i), model).holds);
}

TEST_CASE("negative potential violates the condition") {
    FRWModel model;
    model.k = 1;
    model.potential = [](double) { return -0.4; };
    model.potential_prime = [](double) { return 0.0; };
    CosmoState s;
    s.a = 1.0;
    s.phi = 0.2;
    auto rep = dominant_energy_check(s, model);
    CHECK_FALSE(rep.holds);
    CHECK(rep.s0 < 0.0);
}

TEST_CASE("Type-I route and direct inequality agree") {
    FRWModel model;
    model.potential = [](double phi) { return 0.5 * phi * phi - 0.3; };
    model.potential_prime = [](double phi) { return phi; };
    for (double phi : {-1.0, -0.5, 0.0, 0.3, 0.9}) {
        for (double phi_dot : {-1.0, 0.0, 0.4, 2.0}) {
            CosmoState s;
            s.a = 1.0;
            s.phi = phi;
            s.phi_dot = phi_dot;
            CHECK(dominant_energy_check(s, model).holds ==
                  dec_from_type_one(stress_energy(s, model)));
        }
    }
}

}  // TEST_SUITE
