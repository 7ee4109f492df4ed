#include <benchmark/benchmark.h>

#include "tempus/corkscrew.hpp"
#include "tempus/cosmology.hpp"
#include "tempus/decoherence.hpp"
#include "tempus/rng.hpp"
#include "tempus/systems.hpp"
#include "tempus/trajectory.hpp"
#include "tempus/wigner.hpp"

namespace {

void BM_IntegrateHarmonic(benchmark::State& state) {
    auto sys = tempus::harmonic_oscillator();
    tempus::PhaseState ic{{1.0}, {0.0}, 0.0};
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = tempus::integrate(sys, ic, t_end, 1e-3);
        benchmark::DoNotOptimize(traj.states.back().q[0]);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_IntegrateHarmonic)->Arg(10)->Arg(100);

void BM_CosmoEvolve(benchmark::State& state) {
    tempus::cosmo::FRWModel model;
    model.k = 1;
    model.field_mass = 1.0;
    tempus::cosmo::CosmoState ic;
    ic.phi = 0.4;
    ic.a = tempus::cosmo::solve_constraint_for_a(0.0, ic.phi, 0.0, model).a;
    for (auto _ : state) {
        auto run = tempus::cosmo::evolve_cosmo(ic, model, 5.0, {});
        benchmark::DoNotOptimize(run.max_residual);
    }
}
BENCHMARK(BM_CosmoEvolve);

void BM_AxisMembership(benchmark::State& state) {
    tempus::Rng rng(1);
    std::vector<tempus::corkscrew::ReducedPoint> points(4096);
    for (auto& p : points)
        p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    std::size_t hits = 0;
    for (auto _ : state) {
        for (const auto& p : points)
            hits += tempus::corkscrew::axis_membership(p, 0.05) ? 1 : 0;
        benchmark::DoNotOptimize(hits);
    }
    state.SetItemsProcessed(state.iterations() * points.size());
}
BENCHMARK(BM_AxisMembership);

void BM_MeanValueSeparable(benchmark::State& state) {
    auto spectral = tempus::deco::gaussian_state(1.0);
    auto obs = tempus::deco::flat_observable(spectral.grid);
    double t = 1.0;
    for (auto _ : state) {
        auto mv = tempus::deco::mean_value(spectral, obs, t);
        benchmark::DoNotOptimize(mv.value);
    }
}
BENCHMARK(BM_MeanValueSeparable);

void BM_MeanValueDense(benchmark::State& state) {
    auto spectral = tempus::deco::dense_gaussian_state(1.0, state.range(0));
    auto obs = tempus::deco::flat_observable(spectral.grid);
    obs.separable.reset();
    tempus::deco::DenseKernel ones(spectral.grid->size() * spectral.grid->size(),
                                   tempus::deco::Complex{1.0, 0.0});
    obs.dense = ones;
    double t = 1.0;
    for (auto _ : state) {
        auto mv = tempus::deco::mean_value(spectral, obs, t);
        benchmark::DoNotOptimize(mv.value);
    }
}
BENCHMARK(BM_MeanValueDense)->Arg(128)->Arg(256);

void BM_WignerShell(benchmark::State& state) {
    auto ham = tempus::wigner::sho_hamiltonian();
    auto grid = tempus::wigner::PhaseGrid::centered(2.5, state.range(0));
    // The builder enforces sigma >= 2 |grad H| max(dq, dp).
    double sigma = (state.range(0) >= 512) ? 0.05 : 0.1;
    for (auto _ : state) {
        auto shell = tempus::wigner::wigner_energy_shell(1.0, ham, sigma, grid);
        benchmark::DoNotOptimize(shell.values.data());
    }
}
BENCHMARK(BM_WignerShell)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
