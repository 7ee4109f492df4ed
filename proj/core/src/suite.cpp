#include "tempus/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "tempus/branchnet.hpp"
#include "tempus/corkscrew.hpp"
#include "tempus/cosmology.hpp"
#include "tempus/decoherence.hpp"
#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/rng.hpp"
#include "tempus/schulman.hpp"
#include "tempus/symmetry.hpp"
#include "tempus/systems.hpp"
#include "tempus/wigner.hpp"

namespace tempus::suite {

namespace {

constexpr std::uint64_t kSuiteSeed = 0x7e3a11c5u;

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << "[fail] " << what << "; ";
        } else {
            detail << "[ok] " << what << "; ";
        }
    }
};

// 1. Taxonomy reproduction.
Outcome check_taxonomy(Scale) {
    Outcome out;
    auto catalog = classify_catalog(derive_seed(kSuiteSeed, "taxonomy"));
    auto find = [&](const std::string& id) -> const ClassificationReport& {
        for (const auto& rep : catalog)
            if (rep.system == id) return rep;
        throw InvalidArgument("catalog missing system " + id);
    };

    const auto& a = find("a");
    out.require(a.tri, "a: time-reversal invariant");
    out.require(!a.trajectories.empty() &&
                    a.trajectories[0].report.verdict == Reversibility::Reversible,
                "a: reversible");

    const auto& b = find("b");
    bool has_rev = false, has_irrev = false;
    for (const auto& tv : b.trajectories) {
        has_rev |= tv.report.verdict == Reversibility::Reversible;
        has_irrev |= tv.report.verdict == Reversibility::Irreversible;
    }
    out.require(b.tri, "b: time-reversal invariant");
    out.require(has_rev && has_irrev, "b: mixed per-trajectory verdicts");

    const auto& c = find("c");
    out.require(!c.tri, "c: not time-reversal invariant");
    out.require(!c.trajectories.empty() &&
                    c.trajectories[0].report.verdict == Reversibility::Reversible,
                "c: reversible");

    const auto& d = find("d");
    out.require(!d.tri, "d: not time-reversal invariant");
    out.require(!d.trajectories.empty() &&
                    d.trajectories[0].report.verdict == Reversibility::Irreversible,
                "d: irreversible");
    return out;
}

// 2. Axis-set scaling.
Outcome check_axis_scaling(Scale scale) {
    Outcome out;
    corkscrew::MeasureScanConfig config;
    config.cube_side = 2.0;
    config.epsilons = log_spaced(0.005 * config.cube_side, 0.08 * config.cube_side, 8);
    // The smallest fraction is ~5e-5; anything below 1e6 samples starves it.
    config.n_samples = 1'000'000;
    (void)scale;
    config.seed = derive_seed(kSuiteSeed, "axis-scan");
    config.model.k = 1;
    config.model.field_mass = 0.5;
    config.mode = corkscrew::ScanMode::AxisSet;

    auto result = corkscrew::scan_axis_measure(config);
    double slope = result.loglog_fit.slope;
    out.require(std::abs(slope - 2.0) <= 0.15,
                "log-log slope " + std::to_string(slope) + " within 2.0 +- 0.15");
    for (const auto& row : result.rows) {
        bool within = row.fraction <= 2.0 * row.predicted && row.fraction >= 0.5 * row.predicted;
        out.require(within, "fraction at eps=" + std::to_string(row.epsilon) +
                                " within factor 2 of prediction");
    }
    return out;
}

// 3. Tube scaling.
Outcome check_tube_scaling(Scale scale) {
    Outcome out;
    corkscrew::MeasureScanConfig config;
    config.cube_side = 2.0;
    config.epsilons = log_spaced(0.01 * config.cube_side, 0.1 * config.cube_side, 8);
    config.n_samples = (scale == Scale::Full) ? 200'000 : 20'000;
    config.seed = derive_seed(kSuiteSeed, "tube-scan");
    config.model.k = 1;
    config.model.field_mass = 0.5;
    // A positive Lambda drives trajectories out of the cube before the field
    // oscillations fold the families; the solution set is then two clean
    // sheets on the measured decade.
    config.model.lambda = 1.0;
    config.mode = corkscrew::ScanMode::SolutionTube;

    corkscrew::SurfaceBuildOptions build;
    build.axis_points = (scale == Scale::Full) ? 200 : 100;
    build.spacing = config.epsilons.front() / 4.0 * 0.99;
    auto result = corkscrew::tube_scan_with_refinement(config, build,
                                                       scale == Scale::Full ? 3 : 1);
    double slope = result.loglog_fit.slope;
    out.require(std::abs(slope - 1.0) <= 0.15,
                "log-log slope " + std::to_string(slope) + " within 1.0 +- 0.15");
    return out;
}

// 4. Symmetry <-> axis census.
Outcome check_symmetry_census(Scale scale) {
    Outcome out;
    cosmo::FRWModel model;
    model.k = 1;
    model.field_mass = 0.5;
    const double tol = 1e-4;
    const double eps = 2.0 * tol;
    const double span = 5.0;
    const std::size_t n_each = (scale == Scale::Full) ? 100 : 25;

    cosmo::EvolveOptions eopts;
    eopts.adaptive = true;
    eopts.max_step = span / 400.0;

    std::vector<std::uint8_t> axis_ok(n_each, 0), off_detected(n_each, 0);
    std::vector<double> max_residuals(2 * n_each, 0.0);

    parallel_for_chunks(n_each, [&](std::size_t i) {
        Rng rng(derive_seed(derive_seed(kSuiteSeed, "census-axis"), i));
        cosmo::CosmoState ic;
        double coord = rng.uniform(0.15, 0.9) * static_cast<double>(rng.sign());
        if (i % 2 == 0) {
            ic.phi = coord;  // axis (0, phi, 0)
        } else {
            ic.phi_dot = coord;  // axis (0, 0, phidot)
        }
        ic.a = cosmo::solve_constraint_for_a(ic.a_dot, ic.phi, ic.phi_dot, model).a;
        auto run = cosmo::evolve_two_sided(ic, model, span, span, eopts);
        max_residuals[i] = run.max_residual;
        if (auto sym = cosmo::detect_cosmo_symmetry(run, tol)) axis_ok[i] = 1;
    });

    parallel_for_chunks(n_each, [&](std::size_t i) {
        Rng rng(derive_seed(derive_seed(kSuiteSeed, "census-off"), i));
        corkscrew::ReducedPoint p{};
        for (;;) {
            p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            double d1 = std::max(std::abs(p.a_dot), std::abs(p.phi_dot));
            double d2 = std::max(std::abs(p.a_dot), std::abs(p.phi));
            if (std::min(d1, d2) >= 10.0 * eps) break;
        }
        cosmo::CosmoState ic;
        ic.a_dot = p.a_dot;
        ic.phi = p.phi;
        ic.phi_dot = p.phi_dot;
        ic.a = cosmo::solve_constraint_for_a(ic.a_dot, ic.phi, ic.phi_dot, model).a;
        auto run = cosmo::evolve_two_sided(ic, model, span, span, eopts);
        max_residuals[n_each + i] = run.max_residual;
        if (cosmo::detect_cosmo_symmetry(run, tol)) off_detected[i] = 1;
    });

    std::size_t axis_hits = 0, off_hits = 0;
    for (std::size_t i = 0; i < n_each; ++i) {
        axis_hits += axis_ok[i];
        off_hits += off_detected[i];
    }
    double worst_residual = *std::max_element(max_residuals.begin(), max_residuals.end());
    out.require(axis_hits == n_each, "axis-initialized detections " +
                                         std::to_string(axis_hits) + "/" +
                                         std::to_string(n_each));
    out.require(off_hits == 0,
                "off-axis detections " + std::to_string(off_hits) + "/0 expected");
    out.require(worst_residual <= 1e-6,
                "constraint residual " + std::to_string(worst_residual) + " <= 1e-6");
    return out;
}

// 5. Decoherence oracle match.
Outcome check_decoherence_oracle(Scale) {
    Outcome out;
    {
        const double gamma = 0.3;
        auto state = deco::lorentzian_state(gamma);
        auto obs = deco::flat_observable(state.grid);
        auto grid = deco::symmetric_time_grid(5.0 / gamma, 401);
        auto curve = deco::offdiag_envelope(state, obs, grid);
        double d0 = curve.envelope[grid.size() / 2];
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(curve.envelope[i] / d0 -
                                             std::exp(-gamma * std::abs(grid[i]))));
        out.require(worst <= 1e-3,
                    "lorentzian envelope error " + std::to_string(worst) + " <= 1e-3");
        out.require(curve.twin_asymmetry <= 1e-10, "lorentzian twin symmetry");
    }
    {
        const double sigma = 1.0;
        auto state = deco::gaussian_state(sigma);
        auto obs = deco::flat_observable(state.grid);
        auto grid = deco::symmetric_time_grid(3.5, 401);
        auto curve = deco::offdiag_envelope(state, obs, grid);
        double d0 = curve.envelope[grid.size() / 2];
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst,
                             std::abs(curve.envelope[i] / d0 -
                                      std::exp(-0.5 * sigma * sigma * grid[i] * grid[i])));
        out.require(worst <= 1e-3,
                    "gaussian envelope error " + std::to_string(worst) + " <= 1e-3");
        out.require(curve.twin_asymmetry <= 1e-10, "gaussian twin symmetry");
    }
    {
        auto state = deco::diagonal_state(40.0);
        auto obs = deco::flat_observable(state.grid);
        auto m0 = deco::mean_value(state, obs, 0.0).value;
        double worst = 0.0;
        for (double t : deco::symmetric_time_grid(20.0, 81))
            worst = std::max(worst, std::abs(deco::mean_value(state, obs, t).value - m0));
        out.require(worst <= 1e-10, "diagonal state is stationary");
    }
    return out;
}

// 6. Pole rule consistency.
Outcome check_pole_rule(Scale) {
    Outcome out;
    for (double gamma : {0.2, 0.3, 0.5}) {
        auto state = deco::lorentzian_state(gamma);
        auto obs = deco::flat_observable(state.grid);
        auto grid = deco::symmetric_time_grid(5.0 / gamma, 201);
        auto curve = deco::offdiag_envelope(state, obs, grid);
        auto fit = deco::fit_decoherence_time(curve, deco::DecayForm::Exponential);
        double t_dec = deco::decoherence_time_from_poles(deco::lorentzian_pole_model(gamma));
        double expected = 1.0 / t_dec;
        double rel = std::abs(fit.rate - expected) / expected;
        out.require(rel <= 0.01, "gamma=" + std::to_string(gamma) + " fitted rate within 1% (" +
                                     std::to_string(fit.rate) + ")");
    }
    return out;
}

// 7. Wigner shells.
Outcome check_wigner(Scale) {
    Outcome out;
    auto ham = wigner::sho_hamiltonian();
    // sigma = 0.05 needs the 512 grid: the shell builder requires
    // sigma >= 2 |grad H| max(dq, dp).
    auto grid = wigner::PhaseGrid::centered(2.5, 512);
    const double sigma = 0.05;

    auto shell = wigner::wigner_energy_shell(1.0, ham, sigma, grid);
    double band = wigner::mass_within_band(shell, ham, 1.0, 3.0 * sigma);
    out.require(band >= 0.99, "shell mass within 3 sigma: " + std::to_string(band));

    std::vector<wigner::WignerDensity> shells;
    std::vector<double> omegas{0.5, 1.0, 1.5, 2.0};
    for (double w : omegas) shells.push_back(wigner::wigner_energy_shell(w, ham, sigma, grid));
    auto mix = wigner::wigner_mix({0.25, 0.25, 0.25, 0.25}, shells);
    out.require(std::abs(mix.mass() - 1.0) <= 1e-6,
                "mixture normalization error " + std::to_string(std::abs(mix.mass() - 1.0)));

    wigner::TransportOptions topts;
    auto transported = wigner::shell_transport_invariance(shell, ham, M_PI / 2.0, topts);
    out.require(transported.max_relative_change <= 0.02,
                "harmonic shell transport change " +
                    std::to_string(transported.max_relative_change) + " <= 2%");

    // Negative control: an off-shell blob must move visibly.
    wigner::WignerDensity blob;
    blob.grid = grid;
    blob.sigma = sigma;
    blob.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.nq; ++i) {
        for (std::size_t j = 0; j < grid.np; ++j) {
            double dq = grid.q_at(i) - 1.2;
            double dp = grid.p_at(j);
            blob.values[i * grid.np + j] = std::exp(-(dq * dq + dp * dp) / (2.0 * 0.15 * 0.15));
        }
    }
    double m = blob.mass();
    for (auto& v : blob.values) v /= m;
    auto control = wigner::shell_transport_invariance(blob, ham, M_PI / 2.0, topts);
    out.require(control.max_relative_change >= 0.2,
                "off-shell control change " + std::to_string(control.max_relative_change) +
                    " >= 20%");
    return out;
}

// 8. Branch-graph laws.
Outcome check_branch_laws(Scale scale) {
    Outcome out;
    const std::size_t n_graphs = (scale == Scale::Full) ? 1000 : 200;
    std::size_t order_violations = 0, entropy_violations = 0, mirror_violations = 0,
                invalid_graphs = 0;

    for (std::size_t g = 0; g < n_graphs; ++g) {
        std::uint64_t seed = derive_seed(derive_seed(kSuiteSeed, "branch-laws"), g);
        Rng rng(seed);
        auto graph = branch::random_valid_graph(seed, 3 + rng.uniform_index(10));
        if (!branch::validate_graph(graph).valid()) {
            ++invalid_graphs;
            continue;
        }

        // Strict partial order: irreflexive, antisymmetric, transitive.
        const auto& nodes = graph.nodes;
        for (const auto& n : nodes) {
            if (branch::causally_related(graph, n.id, n.id) !=
                branch::CausalRelation::Unrelated)
                ++order_violations;
        }
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            for (std::size_t b = a + 1; b < nodes.size(); ++b) {
                auto ab = branch::causally_related(graph, nodes[a].id, nodes[b].id);
                auto ba = branch::causally_related(graph, nodes[b].id, nodes[a].id);
                if (ab == branch::CausalRelation::CauseOf &&
                    ba != branch::CausalRelation::EffectOf)
                    ++order_violations;
                if (ab == branch::CausalRelation::Unrelated &&
                    ba != branch::CausalRelation::Unrelated)
                    ++order_violations;
            }
        }
        // Transitivity on sampled triples.
        for (int trial = 0; trial < 16; ++trial) {
            const auto& x = nodes[rng.uniform_index(nodes.size())].id;
            const auto& y = nodes[rng.uniform_index(nodes.size())].id;
            const auto& z = nodes[rng.uniform_index(nodes.size())].id;
            if (x == y || y == z || x == z) continue;
            if (branch::causally_related(graph, x, y) == branch::CausalRelation::CauseOf &&
                branch::causally_related(graph, y, z) == branch::CausalRelation::CauseOf &&
                branch::causally_related(graph, x, z) != branch::CausalRelation::CauseOf)
                ++order_violations;
        }

        // Entropy monotone along driving paths: nonnegative per-branch relax
        // makes every partial sum nondecreasing; verify the per-branch law.
        for (const auto& n : nodes)
            if (n.kind == branch::NodeKind::Branch && n.entropy_out < n.entropy_in)
                ++entropy_violations;

        auto rev = branch::time_reverse_graph(graph);
        auto mg = branch::is_mirror_symmetric(graph);
        auto mr = branch::is_mirror_symmetric(rev);
        if (mg.symmetric != mr.symmetric) ++mirror_violations;
        auto arrow_fwd = branch::global_arrow(graph);
        auto arrow_rev = branch::global_arrow(rev);
        if (!arrow_fwd.well_oriented || !arrow_rev.well_oriented ||
            arrow_fwd.orientation == arrow_rev.orientation)
            ++mirror_violations;
    }

    out.require(invalid_graphs == 0,
                "generated graphs all valid (" + std::to_string(invalid_graphs) + " invalid)");
    out.require(order_violations == 0,
                "causal order is a strict partial order (" +
                    std::to_string(order_violations) + " violations)");
    out.require(entropy_violations == 0, "entropy monotone along driving paths");
    out.require(mirror_violations == 0,
                "mirror verdict reversal-invariant, orientation flips (" +
                    std::to_string(mirror_violations) + " violations)");
    return out;
}

// 9. Schulman experiments.
Outcome check_schulman(Scale scale) {
    Outcome out;
    const std::size_t n_runs = (scale == Scale::Full) ? 100 : 30;
    const std::size_t steps = 20'000;

    branch::UrnPair pair;
    pair.n_a = 200;
    pair.n_b = 20;
    pair.lambda = 0.01;

    std::vector<std::uint8_t> monotone(n_runs, 0), displaced(n_runs, 0);
    parallel_for_chunks(n_runs, [&](std::size_t r) {
        auto res = branch::schulman_sim(pair, steps,
                                        derive_seed(derive_seed(kSuiteSeed, "schulman"), r),
                                        branch::Scenario::AsymmetricSizes);
        monotone[r] = res.composite_monotone ? 1 : 0;
        displaced[r] = res.displacement_detected ? 1 : 0;
    });
    std::size_t n_monotone = 0, n_displaced = 0;
    for (std::size_t r = 0; r < n_runs; ++r) {
        n_monotone += monotone[r];
        n_displaced += displaced[r];
    }
    out.require(n_monotone * 100 >= 95 * n_runs,
                "coarse-grained composite entropy nondecreasing in " +
                    std::to_string(n_monotone) + "/" + std::to_string(n_runs));
    out.require(n_displaced * 100 >= 90 * n_runs,
                "B displaced from equilibrium in " + std::to_string(n_displaced) + "/" +
                    std::to_string(n_runs));

    branch::UrnPair mirror_pair;
    mirror_pair.n_a = 100;
    mirror_pair.n_b = 100;
    auto mirror = branch::schulman_sim(mirror_pair, steps,
                                       derive_seed(kSuiteSeed, "schulman-mirror"),
                                       branch::Scenario::Mirror);
    out.require(mirror.mirror_symmetric,
                "mirror case symmetric (p=" + std::to_string(mirror.ks_p_value) + ")");

    branch::UrnPair skew_pair;
    skew_pair.n_a = 100;
    skew_pair.n_b = 60;
    auto skew = branch::schulman_sim(skew_pair, steps,
                                     derive_seed(kSuiteSeed, "schulman-skew"),
                                     branch::Scenario::Mirror);
    out.require(!skew.mirror_symmetric,
                "size asymmetry breaks the mirror test (p=" +
                    std::to_string(skew.ks_p_value) + ")");
    return out;
}

// 10. Dominant energy condition.
Outcome check_dec(Scale scale) {
    Outcome out;
    cosmo::FRWModel model;
    model.k = 1;
    model.field_mass = 1.0;

    cosmo::CosmoState ic;
    ic.phi = 0.5;
    ic.a = cosmo::solve_constraint_for_a(0.0, ic.phi, 0.0, model).a;
    cosmo::EvolveOptions eopts;
    eopts.adaptive = true;
    eopts.max_step = 0.05;
    auto run = cosmo::evolve_cosmo(ic, model, 20.0, eopts);
    bool holds_everywhere = true;
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        if (!cosmo::dominant_energy_check(cosmo::state_at(run, i), model).holds)
            holds_everywhere = false;
    }
    out.require(holds_everywhere, "dominant energy condition holds along a V>=0 run");

    cosmo::FRWModel negative = model;
    negative.potential = [](double) { return -0.5; };
    negative.potential_prime = [](double) { return 0.0; };
    cosmo::CosmoState still;
    still.a = 1.0;
    still.phi = 0.3;
    still.phi_dot = 0.0;
    out.require(!cosmo::dominant_energy_check(still, negative).holds,
                "negative potential violates the condition");

    const std::size_t n_states = (scale == Scale::Full) ? 10'000 : 2'000;
    Rng rng(derive_seed(kSuiteSeed, "dec-random"));
    cosmo::FRWModel shifted = model;
    shifted.potential = [](double phi) { return 0.5 * phi * phi - 0.3; };
    shifted.potential_prime = [](double phi) { return phi; };
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < n_states; ++i) {
        cosmo::CosmoState s;
        s.a = rng.uniform(0.1, 10.0);
        s.a_dot = rng.uniform(-3.0, 3.0);
        s.phi = rng.uniform(-2.0, 2.0);
        s.phi_dot = rng.uniform(-2.0, 2.0);
        bool direct = cosmo::dominant_energy_check(s, shifted).holds;
        bool type_one = cosmo::dec_from_type_one(cosmo::stress_energy(s, shifted));
        if (direct != type_one) ++disagreements;
    }
    out.require(disagreements == 0, "Type-I route agrees with the direct inequality on " +
                                        std::to_string(n_states) + " states");
    return out;
}

struct CheckSpec {
    const char* name;
    double limit_seconds;
    Outcome (*fn)(Scale);
};

const CheckSpec kChecks[kNumChecks] = {
    {"taxonomy reproduction", 10.0, check_taxonomy},
    {"corkscrew axis-set scaling", 120.0, check_axis_scaling},
    {"corkscrew tube scaling", 600.0, check_tube_scaling},
    {"symmetry <-> axis census", 300.0, check_symmetry_census},
    {"decoherence oracle match", 60.0, check_decoherence_oracle},
    {"pole rule consistency", 30.0, check_pole_rule},
    {"wigner shells", 120.0, check_wigner},
    {"branch-graph laws", 60.0, check_branch_laws},
    {"schulman experiments", 300.0, check_schulman},
    {"dominant energy condition", 30.0, check_dec},
};

}  // namespace

CheckResult run_check(int id, Scale scale) {
    if (id < 1 || id > kNumChecks) throw InvalidArgument("run_check: id out of range");
    const auto& spec = kChecks[id - 1];
    CheckResult result;
    result.id = id;
    result.name = spec.name;
    result.time_limit = spec.limit_seconds;

    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = spec.fn(scale);
    } catch (const std::exception& e) {
        outcome.passed = false;
        outcome.detail << "[exception] " << e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    result.passed = outcome.passed;
    if (scale == Scale::Full && result.seconds > spec.limit_seconds) {
        result.passed = false;
        outcome.detail << "[fail] exceeded time budget of " << spec.limit_seconds << " s; ";
    }
    result.detail = outcome.detail.str();
    return result;
}

std::vector<CheckResult> run_all(Scale scale) {
    std::vector<CheckResult> results;
    for (int id = 1; id <= kNumChecks; ++id) results.push_back(run_check(id, scale));
    return results;
}

}  // namespace tempus::suite
