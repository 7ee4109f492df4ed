#include "tempus/cosmology.hpp"

#include <algorithm>
#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/rng.hpp"
#include "tempus/symmetry.hpp"

namespace tempus::cosmo {

double FRWModel::v(double phi) const {
    if (potential) return potential(phi);
    return 0.5 * field_mass * field_mass * phi * phi;
}

double FRWModel::v_prime(double phi) const {
    if (potential_prime) return potential_prime(phi);
    if (potential) {
        // Central difference fallback for custom potentials without V'.
        double h = 1e-6 * (1.0 + std::abs(phi));
        return (potential(phi + h) - potential(phi - h)) / (2.0 * h);
    }
    return field_mass * field_mass * phi;
}

void FRWModel::validate() const {
    if (kappa <= 0.0) throw InvalidArgument("FRWModel: kappa must be positive");
    if (k != -1 && k != 0 && k != 1) throw InvalidArgument("FRWModel: k must be -1, 0 or +1");
    if (!std::isfinite(v(0.0))) throw InvalidArgument("FRWModel: potential(0) must be finite");
}

StressEnergyFRW stress_energy(const CosmoState& state, const FRWModel& model) {
    StressEnergyFRW se;
    double kinetic = 0.5 * state.phi_dot * state.phi_dot;
    se.rho = kinetic + model.v(state.phi);
    se.pressure = kinetic - model.v(state.phi);
    se.s0 = se.rho;
    se.s[0] = se.s[1] = se.s[2] = se.pressure;
    return se;
}

double constraint_residual(const CosmoState& state, const FRWModel& model) {
    if (state.a <= 0.0) throw SingularState("constraint_residual: a must be positive");
    double rho = stress_energy(state, model).rho;
    double a2 = state.a * state.a;
    double lhs = state.a_dot * state.a_dot;
    double matter = model.kappa * rho * a2;
    double vac = (model.lambda / 3.0) * a2;
    double h = lhs - matter - vac + static_cast<double>(model.k);
    double scale = std::max({lhs, std::abs(static_cast<double>(model.k)), std::abs(matter),
                             std::abs(vac)});
    if (scale == 0.0) return 0.0;
    return h / scale;
}

ConstraintRoot solve_constraint_for_a(double a_dot, double phi, double phi_dot,
                                      const FRWModel& model) {
    model.validate();
    CosmoState probe{1.0, a_dot, phi, phi_dot, 0.0};
    double rho = stress_energy(probe, model).rho;
    double denom = model.kappa * rho + model.lambda / 3.0;
    double numer = a_dot * a_dot + static_cast<double>(model.k);
    if (denom == 0.0 || numer / denom <= 0.0)
        throw NoPhysicalRoot("solve_constraint_for_a: no a > 0 satisfies the constraint");
    ConstraintRoot root;
    root.a = std::sqrt(numer / denom);
    root.multiplicity = 1;  // the quadratic in a has a single positive root
    return root;
}

namespace {

// Flat layout of the cosmological state: q = (a, phi), p = (adot, phidot).
inline CosmoState unpack(const std::vector<double>& x, double t) {
    return CosmoState{x[0], x[2], x[1], x[3], t};
}

inline std::vector<double> pack(const CosmoState& s) {
    return {s.a, s.phi, s.a_dot, s.phi_dot};
}

void frw_field(const FRWModel& model, const std::vector<double>& x, std::vector<double>& dx) {
    const double a = x[0], phi = x[1], a_dot = x[2], phi_dot = x[3];
    dx[0] = a_dot;
    dx[1] = phi_dot;
    dx[2] = model.kappa * a * (model.v(phi) - phi_dot * phi_dot) + (model.lambda / 3.0) * a;
    dx[3] = -3.0 * (a_dot / a) * phi_dot - model.v_prime(phi);
}

void rk4_step4(const FRWModel& model, std::vector<double>& x, double h,
               std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
               std::vector<double>& k4, std::vector<double>& tmp) {
    frw_field(model, x, k1);
    for (int i = 0; i < 4; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    frw_field(model, tmp, k2);
    for (int i = 0; i < 4; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    frw_field(model, tmp, k3);
    for (int i = 0; i < 4; ++i) tmp[i] = x[i] + h * k3[i];
    frw_field(model, tmp, k4);
    for (int i = 0; i < 4; ++i) x[i] += (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

DynamicalSystem frw_system(const FRWModel& model) {
    DynamicalSystem sys;
    sys.dim = 4;
    sys.name = "frw-scalar";
    sys.vector_field = [model](double, const std::vector<double>& x, std::vector<double>& dx) {
        frw_field(model, x, dx);
    };
    return sys;
}

}  // namespace

CosmoState state_at(const CosmoRun& run, std::size_t i) {
    const auto& s = run.trajectory.states.at(i);
    return CosmoState{s.q[0], s.p[0], s.q[1], s.p[1], s.t};
}

CosmoStepper::CosmoStepper(const FRWModel& model, const CosmoState& state, double step)
    : model_(&model), t_(state.t), h_(step) {
    x_[0] = state.a;
    x_[1] = state.phi;
    x_[2] = state.a_dot;
    x_[3] = state.phi_dot;
}

bool CosmoStepper::advance() {
    static thread_local std::vector<double> k1(4), k2(4), k3(4), k4(4), tmp(4), x(4);
    x.assign(x_, x_ + 4);
    rk4_step4(*model_, x, h_, k1, k2, k3, k4, tmp);
    for (double v : x)
        if (!std::isfinite(v)) return false;
    std::copy(x.begin(), x.end(), x_);
    t_ += h_;
    return true;
}

CosmoState CosmoStepper::state() const {
    return CosmoState{x_[0], x_[2], x_[1], x_[3], t_};
}

CosmoRun evolve_cosmo(const CosmoState& state, const FRWModel& model, double t_end,
                      const EvolveOptions& opts) {
    model.validate();
    double initial_residual = std::abs(constraint_residual(state, model));
    if (initial_residual >= 1e-8)
        throw InvalidArgument("evolve_cosmo: initial state violates the constraint");
    if (t_end == state.t) throw InvalidArgument("evolve_cosmo: empty span");

    CosmoRun run;

    if (opts.adaptive) {
        DynamicalSystem sys = frw_system(model);
        PhaseState initial{{state.a, state.phi}, {state.a_dot, state.phi_dot}, state.t};
        AdaptiveOptions aopts;
        aopts.initial_step = std::min(opts.step, 1e-2 * std::abs(t_end - state.t));
        aopts.max_step = opts.max_step;
        double a_max = state.a;
        const double dir = (t_end > state.t) ? 1.0 : -1.0;
        // Near a crunch a ~ (t_c - t)^(1/3), so the plain a-threshold is not
        // reachable in double precision; the contraction timescale a/|adot|
        // acts as the singularity detector of last resort. Contraction means
        // a shrinking along the direction of integration.
        aopts.stop = [&a_max, &opts, dir](double, const std::vector<double>& x) {
            a_max = std::max(a_max, x[0]);
            if (x[0] <= 0.0 || x[0] < opts.singular_fraction * a_max) return true;
            return dir * x[2] < 0.0 && x[0] < 1e-9 * std::abs(x[2]);
        };
        run.trajectory = integrate_adaptive(sys, initial, t_end, aopts);
        run.singular_end = run.trajectory.diagnostics.singular_end;
    } else {
        const double span = t_end - state.t;
        const auto n_steps = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(std::abs(span) / opts.step)));
        const double h = span / static_cast<double>(n_steps);
        run.trajectory.step = h;
        run.trajectory.integrator_id = "rk4";
        run.trajectory.states.reserve(n_steps + 1);
        run.trajectory.states.push_back(
            PhaseState{{state.a, state.phi}, {state.a_dot, state.phi_dot}, state.t});

        std::vector<double> x = pack(state);
        std::vector<double> k1(4), k2(4), k3(4), k4(4), tmp(4);
        double a_max = state.a;
        for (std::size_t i = 0; i < n_steps; ++i) {
            rk4_step4(model, x, h, k1, k2, k3, k4, tmp);
            double t = (i + 1 == n_steps) ? t_end
                                          : state.t + h * static_cast<double>(i + 1);
            for (double v : x)
                if (!std::isfinite(v)) throw NonFinite("evolve_cosmo: state blew up", t - h);
            a_max = std::max(a_max, x[0]);
            // Fixed steps stop resolving the collapse once the contraction
            // timescale a/|adot| falls under ~200 steps; halt there rather
            // than integrate into the singularity. Contraction means a
            // shrinking along the direction of integration (h is signed).
            bool singular = x[0] <= 0.0 || x[0] < opts.singular_fraction * a_max ||
                            (h * x[2] < 0.0 && x[0] < 200.0 * std::abs(h) * std::abs(x[2]));
            if (singular) {
                run.singular_end = true;
                break;
            }
            run.trajectory.states.push_back(PhaseState{{x[0], x[1]}, {x[2], x[3]}, t});
        }
        run.trajectory.diagnostics.singular_end = run.singular_end;
        run.trajectory.diagnostics.end_time = run.trajectory.states.back().t;
    }

    run.residuals.reserve(run.trajectory.size());
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        double r = std::abs(constraint_residual(state_at(run, i), model));
        run.residuals.push_back(r);
        run.max_residual = std::max(run.max_residual, r);
    }
    if (run.max_residual > opts.drift_limit)
        throw ConstraintDrift("evolve_cosmo: constraint residual exceeded limit",
                              run.max_residual);
    return run;
}

CosmoRun evolve_two_sided(const CosmoState& state, const FRWModel& model, double t_back,
                          double t_fwd, const EvolveOptions& opts) {
    if (t_back <= 0.0 || t_fwd <= 0.0)
        throw InvalidArgument("evolve_two_sided: spans must be positive");
    CosmoRun back = evolve_cosmo(state, model, state.t - t_back, opts);
    CosmoRun fwd = evolve_cosmo(state, model, state.t + t_fwd, opts);

    CosmoRun run;
    run.trajectory.step = fwd.trajectory.step;
    run.trajectory.integrator_id = fwd.trajectory.integrator_id;
    run.singular_end = back.singular_end || fwd.singular_end;
    run.trajectory.states.reserve(back.trajectory.size() + fwd.trajectory.size());
    for (auto it = back.trajectory.states.rbegin(); it != back.trajectory.states.rend(); ++it)
        run.trajectory.states.push_back(*it);
    for (std::size_t i = 1; i < fwd.trajectory.size(); ++i)
        run.trajectory.states.push_back(fwd.trajectory.states[i]);
    run.residuals.reserve(run.trajectory.size());
    for (auto it = back.residuals.rbegin(); it != back.residuals.rend(); ++it)
        run.residuals.push_back(*it);
    for (std::size_t i = 1; i < fwd.residuals.size(); ++i)
        run.residuals.push_back(fwd.residuals[i]);
    run.max_residual = std::max(back.max_residual, fwd.max_residual);
    return run;
}

std::optional<CosmoSymmetry> detect_cosmo_symmetry(const CosmoRun& run, double tol) {
    const auto& traj = run.trajectory;
    if (traj.size() < 33) return std::nullopt;

    static const std::vector<int> even_parity{+1, +1, -1, -1};  // (a, phi, adot, phidot)
    static const std::vector<int> odd_parity{+1, -1, -1, +1};

    std::optional<CosmoSymmetry> best;
    double best_window = -1.0;
    const double t0 = traj.t_begin();
    const double t1 = traj.t_end();
    const double dt = (t1 - t0) / static_cast<double>(traj.size() - 1);

    auto consider = [&](double t_star) {
        auto x = traj.interpolate(t_star);
        const double phi = x[1], phi_dot = x[3];
        std::optional<Parity> parity;
        if (std::abs(phi_dot) <= tol)
            parity = Parity::Even;
        else if (std::abs(phi) <= tol)
            parity = Parity::Odd;
        if (!parity) return;
        double window = std::min(t_star - t0, t1 - t_star);
        if (window < 16.0 * dt) return;
        double res = reflection_residual(
            traj, t_star, *parity == Parity::Even ? even_parity : odd_parity);
        if (res <= tol && window > best_window) {
            best_window = window;
            best = CosmoSymmetry{t_star, *parity, res};
        }
    };

    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        double v0 = traj.states[i].p[0];
        double v1 = traj.states[i + 1].p[0];
        if (v0 == 0.0) {
            consider(traj.states[i].t);
        } else if ((v0 > 0) != (v1 > 0)) {
            double u = v0 / (v0 - v1);
            consider(traj.states[i].t + u * (traj.states[i + 1].t - traj.states[i].t));
        }
    }
    return best;
}

TurningSymmetryReport pure_frw_turning_symmetry(const PureFRWModel& model, double a_start,
                                                double t_span, double step, double tol) {
    if (!model.squared_speed) throw InvalidArgument("pure_frw_turning_symmetry: missing g(a)");
    auto g = model.squared_speed;
    auto gp = [&](double a) {
        if (model.d_squared_speed) return (*model.d_squared_speed)(a);
        double h = 1e-6 * (1.0 + std::abs(a));
        return (g(a + h) - g(a - h)) / (2.0 * h);
    };

    TurningSymmetryReport rep;
    double g0 = g(a_start);
    if (g0 < 0.0) throw InvalidArgument("pure_frw_turning_symmetry: g(a_start) < 0");

    DynamicalSystem sys;
    sys.dim = 2;
    sys.name = "pure-frw";
    sys.vector_field = [&](double, const std::vector<double>& x, std::vector<double>& dx) {
        dx[0] = x[1];
        dx[1] = 0.5 * gp(x[0]);
    };
    PhaseState ic{{a_start}, {std::sqrt(g0)}, 0.0};
    auto traj = integrate(sys, ic, t_span, step);

    // Locate the first adot sign change.
    std::optional<double> t_cross;
    double min_abs_speed = std::abs(traj.states[0].p[0]);
    double a_at_min = a_start;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        double v0 = traj.states[i].p[0];
        double v1 = traj.states[i + 1].p[0];
        if (std::abs(v1) < min_abs_speed) {
            min_abs_speed = std::abs(v1);
            a_at_min = traj.states[i + 1].q[0];
        }
        if (v0 == 0.0 || (v0 > 0) != (v1 > 0)) {
            double u = (v0 == 0.0) ? 0.0 : v0 / (v0 - v1);
            t_cross = traj.states[i].t + u * (traj.states[i + 1].t - traj.states[i].t);
            break;
        }
    }

    if (!t_cross) {
        double v0 = std::sqrt(std::max(g0, 1e-300));
        double gp_scale = std::abs(gp(a_start)) + 1e-12;
        if (min_abs_speed < 1e-3 * v0 && std::abs(gp(a_at_min)) < 1e-3 * gp_scale) {
            rep.generic_root = false;
            rep.note = "approached a degenerate root g'(a_S)=0; no finite-time turning point";
        } else {
            rep.monotone = true;
            rep.note = "no turning point inside the span; a is monotone";
        }
        return rep;
    }

    rep.has_turning_point = true;
    rep.t_s = *t_cross;
    rep.a_s = traj.interpolate(*t_cross)[0];
    rep.generic_root = std::abs(gp(rep.a_s)) > 1e-8 * (std::abs(gp(a_start)) + 1.0);

    double window = std::min(rep.t_s - traj.t_begin(), traj.t_end() - rep.t_s);
    const double dt = std::abs(traj.step);
    const auto n_tau = static_cast<std::size_t>(std::floor(window / dt));
    for (std::size_t j = 1; j <= n_tau; ++j) {
        double ap = traj.interpolate(rep.t_s + j * dt)[0];
        double am = traj.interpolate(rep.t_s - j * dt)[0];
        rep.max_residual = std::max(rep.max_residual, std::abs(ap - am));
    }
    rep.symmetric = rep.generic_root && rep.max_residual <= tol;
    if (!rep.generic_root) rep.note = "turning point at a degenerate root flagged non-generic";
    return rep;
}

InstabilityStats big_bang_surface_instability(const FRWModel& model, std::size_t n_samples,
                                              std::uint64_t seed, double delta,
                                              double window) {
    if (delta <= 0.0) throw InvalidArgument("big_bang_surface_instability: delta > 0 required");
    model.validate();

    InstabilityStats stats;
    stats.n_samples = n_samples;
    stats.exponents.assign(n_samples, 0.0);

    auto sample_state = [&](Rng& rng) {
        double a_dot = rng.uniform(0.5, 2.0);
        double phi = rng.uniform(-1.0, 1.0);
        double rho = ((a_dot * a_dot + static_cast<double>(model.k)) / (delta * delta) -
                      model.lambda / 3.0) /
                     model.kappa;
        double kin = rho - model.v(phi);
        double phi_dot = static_cast<double>(rng.sign()) * std::sqrt(std::max(0.0, 2.0 * kin));
        return CosmoState{delta, a_dot, phi, phi_dot, 0.0};
    };

    auto relative_distance = [](const CosmoState& x, const CosmoState& y) {
        auto rel = [](double a, double b) {
            return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-12);
        };
        return std::max({rel(x.a_dot, y.a_dot), rel(x.phi, y.phi), rel(x.phi_dot, y.phi_dot)});
    };

    EvolveOptions opts;
    opts.adaptive = true;
    opts.drift_limit = 1e-3;  // residuals are monitored but not limiting here

    parallel_for_chunks(n_samples, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        CosmoState base = sample_state(rng);

        CosmoState pert = base;
        pert.a_dot *= 1.0 + delta * rng.uniform(-1.0, 1.0);
        pert.phi *= 1.0 + delta * rng.uniform(-1.0, 1.0);
        pert.phi_dot *= 1.0 + delta * rng.uniform(-1.0, 1.0);
        pert.a = solve_constraint_for_a(pert.a_dot, pert.phi, pert.phi_dot, model).a;

        double d0 = relative_distance(base, pert);
        if (d0 == 0.0) {
            stats.exponents[i] = 0.0;
            return;
        }
        CosmoRun run_a = evolve_cosmo(base, model, window, opts);
        CosmoRun run_b = evolve_cosmo(pert, model, window, opts);
        double t_eff =
            0.999 * std::min({run_a.trajectory.t_end(), run_b.trajectory.t_end(), window});
        if (t_eff <= 0.0) {
            stats.exponents[i] = 0.0;
            return;
        }
        CosmoState xa = unpack(run_a.trajectory.interpolate(t_eff), t_eff);
        CosmoState xb = unpack(run_b.trajectory.interpolate(t_eff), t_eff);
        double d1 = relative_distance(xa, xb);
        // Near-singular closed universes live for O(delta) time, so a fixed
        // time window cannot give a delta-stable rate. The divergence is a
        // power law in time-from-bang; report its index, with the bang offset
        // t0 = delta / (3 adot) from the stiff-epoch relation a^3 = 3 B t.
        double t0 = base.a / (3.0 * base.a_dot);
        stats.exponents[i] =
            std::log(std::max(d1, 1e-300) / d0) / std::log((t_eff + t0) / t0);
    });

    std::size_t positive = 0;
    double sum = 0.0;
    for (double e : stats.exponents) {
        if (e > 0.0) ++positive;
        sum += e;
    }
    stats.positive_fraction =
        n_samples ? static_cast<double>(positive) / static_cast<double>(n_samples) : 0.0;
    stats.mean_exponent = n_samples ? sum / static_cast<double>(n_samples) : 0.0;
    return stats;
}

LyapunovReport lyapunov_variable(const CosmoRun& run, const FRWModel& model) {
    LyapunovReport rep;
    const auto& traj = run.trajectory;
    rep.t.reserve(traj.size());
    rep.value.reserve(traj.size());

    std::vector<double> accel(traj.size());
    double accel_scale = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CosmoState s = state_at(run, i);
        double addot = model.kappa * s.a * (model.v(s.phi) - s.phi_dot * s.phi_dot) +
                       (model.lambda / 3.0) * s.a;
        accel[i] = addot;
        accel_scale = std::max(accel_scale, std::abs(addot));
        rep.t.push_back(s.t);
        rep.value.push_back(-s.a_dot);
    }
    const double tol_acc = 1e-12 * std::max(1.0, accel_scale);

    bool in_epoch = false;
    double epoch_start = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        bool accelerating = accel[i] > tol_acc;
        if (accelerating && !in_epoch) {
            in_epoch = true;
            epoch_start = rep.t[i];
        } else if (!accelerating && in_epoch) {
            in_epoch = false;
            rep.accelerating_epochs.emplace_back(epoch_start, rep.t[i]);
        }
        if (accelerating) rep.premise_holds = false;
    }
    if (in_epoch) rep.accelerating_epochs.emplace_back(epoch_start, rep.t.back());

    double value_scale = 0.0;
    for (double v : rep.value) value_scale = std::max(value_scale, std::abs(v));
    const double slack = 1e-9 * std::max(1.0, value_scale);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        if (accel[i] <= tol_acc && accel[i + 1] <= tol_acc &&
            rep.value[i + 1] < rep.value[i] - slack) {
            monotone = false;
            break;
        }
    }
    rep.monotone_nondecreasing = monotone;
    return rep;
}

DecReport dominant_energy_check(const CosmoState& state, const FRWModel& model) {
    auto se = stress_energy(state, model);
    DecReport rep;
    rep.s0 = se.s0;
    rep.si = se.s[0];
    rep.margin = se.rho - std::abs(se.pressure);
    rep.holds = se.rho >= 0.0 && rep.margin >= 0.0;
    return rep;
}

bool dec_from_type_one(const StressEnergyFRW& se) {
    if (se.s0 < 0.0) return false;
    for (double si : se.s) {
        if (si < -se.s0 || si > se.s0) return false;
    }
    return true;
}

}  // namespace tempus::cosmo
