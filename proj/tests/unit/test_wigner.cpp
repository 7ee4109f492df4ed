#include <doctest.h>

#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/wigner.hpp"

using namespace tempus;
using namespace tempus::wigner;

TEST_SUITE("wigner") {

TEST_CASE("shell mass concentrates within three smoothing widths") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 512);
    auto shell = wigner_energy_shell(1.0, ham, 0.05, grid);
    CHECK(shell.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mass_within_band(shell, ham, 1.0, 3.0 * 0.05) >= 0.99);
}

TEST_CASE("energies outside the attainable range are rejected") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 128);
    CHECK_THROWS_AS(wigner_energy_shell(-0.5, ham, 0.05, grid), EmptyShell);
    CHECK_THROWS_AS(wigner_energy_shell(100.0, ham, 0.05, grid), EmptyShell);
}

TEST_CASE("under-resolved smoothing width is rejected") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 64);  // coarse cells
    CHECK_THROWS_AS(wigner_energy_shell(1.0, ham, 0.01, grid), InvalidArgument);
}

TEST_CASE("halving sigma halves the shell thickness") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 1024);
    auto wide = wigner_energy_shell(1.0, ham, 0.05, grid);
    auto thin = wigner_energy_shell(1.0, ham, 0.025, grid);
    double ratio = std::sqrt(energy_second_moment(thin, ham, 1.0) /
                             energy_second_moment(wide, ham, 1.0));
    CHECK(std::abs(ratio - 0.5) <= 0.05);
}

TEST_CASE("delta weight reproduces the single shell") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 128);
    auto shell = wigner_energy_shell(1.0, ham, 0.15, grid);
    auto mix = wigner_mix({1.0}, {shell});
    for (std::size_t i = 0; i < shell.values.size(); ++i)
        CHECK(mix.values[i] == shell.values[i]);
}

TEST_CASE("two distant shells split the mass evenly") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.8, 256);
    auto s1 = wigner_energy_shell(0.5, ham, 0.1, grid);
    auto s2 = wigner_energy_shell(2.0, ham, 0.1, grid);
    auto mix = wigner_mix({0.5, 0.5}, {s1, s2});
    CHECK(std::abs(mix.mass() - 1.0) <= 1e-6);
    CHECK(mass_within_band(mix, ham, 0.5, 0.2) == doctest::Approx(0.5).epsilon(0.04));
    CHECK(mass_within_band(mix, ham, 2.0, 0.2) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("uniform weights flatten the energy marginal") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.8, 256);
    std::vector<WignerDensity> shells;
    std::vector<double> weights;
    for (double w = 0.6; w <= 1.81; w += 0.2) {
        shells.push_back(wigner_energy_shell(w, ham, 0.1, grid));
        weights.push_back(1.0);
    }
    for (auto& w : weights) w /= static_cast<double>(weights.size());
    auto mix = wigner_mix(weights, shells);
    // Interior energy bands should carry nearly equal mass.
    double b1 = mass_within_band(mix, ham, 1.0, 0.1);
    double b2 = mass_within_band(mix, ham, 1.4, 0.1);
    CHECK(std::abs(b1 - b2) <= 0.2 * std::max(b1, b2));
}

TEST_CASE("mixing is linear in the weights") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 256);
    auto s1 = wigner_energy_shell(0.8, ham, 0.15, grid);
    auto s2 = wigner_energy_shell(1.4, ham, 0.15, grid);
    auto direct = wigner_mix({0.3, 0.7}, {s1, s2});
    auto nested = wigner_mix({0.3, 0.7}, {wigner_mix({1.0}, {s1}), wigner_mix({1.0}, {s2})});
    for (std::size_t i = 0; i < direct.values.size(); ++i)
        CHECK(std::abs(direct.values[i] - nested.values[i]) <= 1e-10);
}

TEST_CASE("weight mismatches are rejected") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 128);
    auto shell = wigner_energy_shell(1.0, ham, 0.15, grid);
    CHECK_THROWS_AS(wigner_mix({0.5, 0.5}, {shell}), WeightMismatch);
    CHECK_THROWS_AS(wigner_mix({0.7}, {shell}), WeightMismatch);
}

TEST_CASE("transport leaves the density unchanged at t = 0") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 128);
    auto shell = wigner_energy_shell(1.0, ham, 0.15, grid);
    auto result = shell_transport_invariance(shell, ham, 0.0, {});
    CHECK(result.max_relative_change == 0.0);
}

TEST_CASE("harmonic shells are flow invariant; off-shell blobs are not") {
    auto ham = sho_hamiltonian();
    auto grid = PhaseGrid::centered(2.5, 512);
    auto shell = wigner_energy_shell(1.0, ham, 0.05, grid);
    auto invariant = shell_transport_invariance(shell, ham, M_PI / 2.0, {});
    CHECK(invariant.max_relative_change <= 0.02);
    CHECK(invariant.mass_error <= 0.02);

    WignerDensity blob;
    blob.grid = grid;
    blob.sigma = 0.05;
    blob.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.nq; ++i)
        for (std::size_t j = 0; j < grid.np; ++j) {
            double dq = grid.q_at(i) - 1.2;
            double dp = grid.p_at(j);
            blob.values[i * grid.np + j] =
                std::exp(-(dq * dq + dp * dp) / (2.0 * 0.15 * 0.15));
        }
    double m = blob.mass();
    for (auto& v : blob.values) v /= m;
    auto moved = shell_transport_invariance(blob, ham, M_PI / 2.0, {});
    CHECK(moved.max_relative_change >= 0.2);
}

TEST_CASE("free streaming off the grid raises FlowEscapedGrid") {
    PhaseHamiltonian free;
    free.h = [](double, double p) { return 0.5 * p * p; };
    free.dh_dq = [](double, double) { return 0.0; };
    free.dh_dp = [](double, double p) { return p; };
    auto grid = PhaseGrid::centered(2.0, 128);

    WignerDensity blob;
    blob.grid = grid;
    blob.sigma = 0.1;
    blob.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.nq; ++i)
        for (std::size_t j = 0; j < grid.np; ++j) {
            double dq = grid.q_at(i) - 1.0;
            double dp = grid.p_at(j) - 1.0;
            blob.values[i * grid.np + j] =
                std::exp(-(dq * dq + dp * dp) / (2.0 * 0.2 * 0.2));
        }
    double m = blob.mass();
    for (auto& v : blob.values) v /= m;
    CHECK_THROWS_AS(shell_transport_invariance(blob, free, 2.0, {}), FlowEscapedGrid);
}

}  // TEST_SUITE
