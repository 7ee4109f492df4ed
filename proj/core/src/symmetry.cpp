#include "tempus/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/rng.hpp"
#include "tempus/systems.hpp"

namespace tempus {

const char* to_string(Reversibility r) {
    switch (r) {
        case Reversibility::Reversible: return "reversible";
        case Reversibility::Irreversible: return "irreversible";
        default: return "undetermined";
    }
}

namespace {

double max_norm(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double max_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 1.0;
    return dot / std::sqrt(na * nb);
}

}  // namespace

bool check_time_reversal_invariance(const DynamicalSystem& system, std::size_t samples,
                                    std::uint64_t seed, double tol, double box_half_width) {
    system.validate();
    if (samples < 1) throw InvalidArgument("check_time_reversal_invariance: samples >= 1");
    Rng rng(seed);
    std::vector<double> x(system.dim), fx(system.dim), frx(system.dim);
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& v : x) v = rng.uniform(-box_half_width, box_half_width);
        system.vector_field(0.0, x, fx);
        auto rx = system.apply_involution(x);
        system.vector_field(0.0, rx, frx);
        auto rfrx = system.apply_involution(frx);
        double scale = 1.0 + max_norm(fx);
        for (std::size_t i = 0; i < system.dim; ++i) {
            if (std::abs(rfrx[i] + fx[i]) > tol * scale) return false;
        }
    }
    return true;
}

ReversibilityReport check_reversibility(const Trajectory& trajectory,
                                        const DynamicalSystem& system, double tol_close,
                                        double t_horizon, const ReversibilityOptions& opts) {
    ReversibilityReport rep;
    if (trajectory.size() < 8) throw InvalidArgument("check_reversibility: too few samples");
    if (std::abs(trajectory.t_end() - trajectory.t_begin()) + 1e-12 < t_horizon)
        throw InvalidArgument("check_reversibility: trajectory shorter than requested horizon");

    const auto x0 = trajectory.front().to_vector();
    const double norm0 = std::max(1e-12, std::sqrt([&] {
                             double s = 0.0;
                             for (double v : x0) s += v * v;
                             return s;
                         }()));

    // Escape by norm or by unbounded angle advance.
    for (const auto& st : trajectory.states) {
        auto x = st.to_vector();
        double n = 0.0;
        for (double v : x) n += v * v;
        if (std::sqrt(n) > opts.escape_norm_factor * norm0) {
            rep.verdict = Reversibility::Irreversible;
            rep.reason = "norm escape";
            return rep;
        }
    }
    for (std::size_t j : system.angle_indices) {
        auto at = [&](std::size_t i) {
            const auto& s = trajectory.states[i];
            return (j < s.q.size()) ? s.q[j] : s.p[j - s.q.size()];
        };
        double net = at(trajectory.size() - 1) - at(0);
        if (std::abs(net) > opts.max_angle_advance) {
            // Monotone advance check: net displacement dominates the wiggle.
            double total = 0.0;
            for (std::size_t i = 1; i < trajectory.size(); ++i)
                total += std::abs(at(i) - at(i - 1));
            if (std::abs(net) > 0.8 * total) {
                rep.verdict = Reversibility::Irreversible;
                rep.reason = "angle unbounded";
                return rep;
            }
        }
    }

    // Close returns to the initial point.
    std::vector<double> d(trajectory.size());
    double d_max = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        d[i] = euclid(trajectory.states[i].to_vector(), x0);
        d_max = std::max(d_max, d[i]);
    }
    std::vector<double> f0(system.dim), fi(system.dim);
    system.vector_field(trajectory.front().t, x0, f0);

    std::vector<double> return_times;
    bool left_neighborhood = false;
    for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
        if (d[i] > std::max(10.0 * tol_close, 0.25 * d_max)) left_neighborhood = true;
        bool local_min = d[i] <= d[i - 1] && d[i] <= d[i + 1];
        if (!local_min || !left_neighborhood) continue;
        // The sampled minimum can overshoot the true closest approach by
        // ~speed*dt/2; refine with a parabola through the squared distances.
        double y0 = d[i - 1] * d[i - 1], y1 = d[i] * d[i], y2 = d[i + 1] * d[i + 1];
        double denom = y0 - 2.0 * y1 + y2;
        double d_min = d[i];
        double t_min = trajectory.states[i].t;
        if (denom > 0.0) {
            double u = 0.5 * (y0 - y2) / denom;  // vertex offset in grid units
            u = std::clamp(u, -1.0, 1.0);
            double y_min = y1 - 0.25 * (y0 - y2) * u;
            d_min = std::sqrt(std::max(0.0, y_min));
            t_min += u * (trajectory.states[i + 1].t - trajectory.states[i].t);
        }
        if (d_min < tol_close) {
            auto xi = trajectory.states[i].to_vector();
            system.vector_field(trajectory.states[i].t, xi, fi);
            if (cosine(fi, f0) > opts.alignment_min) {
                return_times.push_back(t_min - trajectory.front().t);
                left_neighborhood = false;
            }
        }
    }
    if (return_times.size() >= 2) {
        rep.verdict = Reversibility::Reversible;
        rep.period = return_times.front();
        rep.reason = "closed orbit";
        return rep;
    }

    // Attractor: the late-time motion collapses onto the final point.
    const auto x_end = trajectory.back().to_vector();
    std::size_t head = std::max<std::size_t>(2, trajectory.size() / 10);
    double a_head = 0.0, a_tail = 0.0;
    for (std::size_t i = 0; i < head; ++i)
        a_head = std::max(a_head, euclid(trajectory.states[i].to_vector(), x_end));
    for (std::size_t i = trajectory.size() - head; i < trajectory.size(); ++i)
        a_tail = std::max(a_tail, euclid(trajectory.states[i].to_vector(), x_end));
    if (a_head > 0.0 && a_tail < 0.01 * a_head) {
        rep.verdict = Reversibility::Irreversible;
        rep.reason = "attractor convergence";
        return rep;
    }

    rep.verdict = Reversibility::Undetermined;
    rep.reason = "no closure or escape within horizon";
    return rep;
}

std::vector<int> default_parity(std::size_t dim) {
    std::vector<int> parity(dim, 1);
    for (std::size_t i = dim / 2; i < dim; ++i) parity[i] = -1;
    return parity;
}

double reflection_residual(const Trajectory& traj, double t_s, const std::vector<int>& parity,
                           std::size_t max_offsets) {
    const double t0 = traj.t_begin();
    const double t1 = traj.t_end();
    const double dt = (t1 - t0) / static_cast<double>(traj.size() - 1);
    const double half_window = std::min(t_s - t0, t1 - t_s);
    const auto w = static_cast<std::size_t>(std::floor(half_window / dt));
    if (w < 1) return std::numeric_limits<double>::infinity();

    std::size_t stride = std::max<std::size_t>(1, w / max_offsets);
    double worst = 0.0;
    for (std::size_t j = 1; j <= w; j += stride) {
        auto plus = traj.interpolate(t_s + j * dt);
        auto minus = traj.interpolate(t_s - j * dt);
        for (std::size_t i = 0; i < plus.size(); ++i) {
            double mirrored = (parity[i] > 0) ? minus[i] : -minus[i];
            worst = std::max(worst, std::abs(plus[i] - mirrored));
        }
    }
    // Window edge, where drift accumulates most.
    {
        auto plus = traj.interpolate(t_s + w * dt);
        auto minus = traj.interpolate(t_s - w * dt);
        for (std::size_t i = 0; i < plus.size(); ++i) {
            double mirrored = (parity[i] > 0) ? minus[i] : -minus[i];
            worst = std::max(worst, std::abs(plus[i] - mirrored));
        }
    }
    return worst;
}

std::optional<TimeSymmetry> find_time_symmetry(const Trajectory& trajectory, double tol,
                                               const std::vector<int>& parity_in) {
    const std::size_t n = trajectory.size();
    if (n < 33) throw WindowTooShort("find_time_symmetry: need >= 16 samples on both sides");

    const std::size_t dim = trajectory.front().dim() * 2;
    std::vector<int> parity = parity_in.empty() ? default_parity(dim) : parity_in;
    if (parity.size() != dim) throw DimensionMismatch("find_time_symmetry: parity size");

    // Uniform grid expected.
    const double dt = (trajectory.t_end() - trajectory.t_begin()) / static_cast<double>(n - 1);

    // Cheap one-step score to shortlist candidates.
    std::vector<double> score(n, std::numeric_limits<double>::infinity());
    for (std::size_t s = 16; s + 16 < n; ++s) {
        auto plus = trajectory.states[s + 1].to_vector();
        auto minus = trajectory.states[s - 1].to_vector();
        double r = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double mirrored = (parity[i] > 0) ? minus[i] : -minus[i];
            r = std::max(r, std::abs(plus[i] - mirrored));
        }
        score[s] = r;
    }

    // Local minima of the score, best first.
    std::vector<std::size_t> candidates;
    for (std::size_t s = 17; s + 17 < n; ++s) {
        if (score[s] <= score[s - 1] && score[s] <= score[s + 1]) candidates.push_back(s);
    }
    if (candidates.empty()) return std::nullopt;
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    if (candidates.size() > 12) candidates.resize(12);

    double best_res = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    double best_window = -1.0;
    const double t0 = trajectory.t_begin();
    const double t1 = trajectory.t_end();
    for (std::size_t s : candidates) {
        double t_c = trajectory.states[s].t;
        double res = reflection_residual(trajectory, t_c, parity, 512);
        // Refine continuously within the neighboring grid cells.
        double t_ref = golden_section_min(
            [&](double ts) { return reflection_residual(trajectory, ts, parity, 512); },
            t_c - dt, t_c + dt, 1e-6 * dt);
        double res_ref = reflection_residual(trajectory, t_ref, parity, 512);
        if (res_ref < res) {
            res = res_ref;
            t_c = t_ref;
        }
        res = reflection_residual(trajectory, t_c, parity);  // full-resolution check
        double window = std::min(t_c - t0, t1 - t_c);
        // A trajectory may hold several genuine centers (periodic orbits);
        // prefer the one confirmed over the widest window.
        if (res <= tol) {
            if (window > best_window) {
                best_window = window;
                best_res = res;
                best_t = t_c;
            }
        } else if (best_window < 0.0 && res < best_res) {
            best_res = res;
            best_t = t_c;
        }
    }

    if (best_window >= 0.0) return TimeSymmetry{best_t, best_res};
    return std::nullopt;
}

std::vector<ClassificationReport> classify_catalog(std::uint64_t seed) {
    std::vector<ClassificationReport> out;
    const double tol_tri = 1e-9;
    const double tol_close = 1e-4;
    const std::size_t tri_samples = 64;

    // a: harmonic oscillator.
    {
        ClassificationReport rep;
        rep.system = "a";
        rep.tol_tri = tol_tri;
        rep.tol_close = tol_close;
        auto sys = harmonic_oscillator(1.0);
        rep.tri = check_time_reversal_invariance(sys, tri_samples, derive_seed(seed, "tri-a"),
                                                 tol_tri);
        PhaseState ic{{1.0}, {0.0}, 0.0};
        auto traj = integrate(sys, ic, 8.0 * M_PI, 1e-3);
        rep.trajectories.push_back({"ellipse", check_reversibility(traj, sys, tol_close, 8.0)});
        // Symmetric two-sided run around the turning point: t_S = 0 interior.
        auto back = integrate(sys, ic, -2.0 * M_PI, 1e-3);
        auto fwd = integrate(sys, ic, 2.0 * M_PI, 1e-3);
        Trajectory both;
        both.step = fwd.step;
        both.integrator_id = fwd.integrator_id;
        for (auto it = back.states.rbegin(); it != back.states.rend(); ++it)
            both.states.push_back(*it);
        for (std::size_t i = 1; i < fwd.states.size(); ++i) both.states.push_back(fwd.states[i]);
        if (auto sym = find_time_symmetry(both, 1e-6)) rep.t_symmetry = sym->t_s;
        out.push_back(std::move(rep));
    }

    // b: pendulum, mixed verdicts per trajectory.
    {
        ClassificationReport rep;
        rep.system = "b";
        rep.tol_tri = tol_tri;
        rep.tol_close = tol_close;
        auto sys = pendulum(1.0);
        rep.tri = check_time_reversal_invariance(sys, tri_samples, derive_seed(seed, "tri-b"),
                                                 tol_tri);
        const double e_sep = 0.5;  // energy of the unstable equilibrium (K=1)
        auto launch = [&](double energy) {
            double p0 = std::sqrt(2.0 * (energy + 0.5));
            return PhaseState{{M_PI}, {p0}, 0.0};
        };
        auto inside = integrate(sys, launch(0.9 * e_sep), 50.0, 1e-3);
        rep.trajectories.push_back(
            {"inside separatrix", check_reversibility(inside, sys, tol_close, 50.0)});
        auto above = integrate(sys, launch(1.2 * e_sep), 50.0, 1e-3);
        rep.trajectories.push_back(
            {"above separatrix", check_reversibility(above, sys, tol_close, 50.0)});
        out.push_back(std::move(rep));
    }

    // c: modified oscillator, K+ != K-.
    {
        ClassificationReport rep;
        rep.system = "c";
        rep.tol_tri = tol_tri;
        rep.tol_close = tol_close;
        auto sys = modified_oscillator(1.0, 2.0);
        rep.tri = check_time_reversal_invariance(sys, tri_samples, derive_seed(seed, "tri-c"),
                                                 tol_tri);
        PhaseState ic{{1.0}, {0.0}, 0.0};
        auto traj = integrate(sys, ic, 20.0, 1e-3);
        rep.trajectories.push_back(
            {"glued ellipse", check_reversibility(traj, sys, tol_close, 20.0)});
        out.push_back(std::move(rep));
    }

    // d: damped oscillator.
    {
        ClassificationReport rep;
        rep.system = "d";
        rep.tol_tri = tol_tri;
        rep.tol_close = tol_close;
        auto sys = damped_oscillator(1.0, 1.0);
        rep.tri = check_time_reversal_invariance(sys, tri_samples, derive_seed(seed, "tri-d"),
                                                 tol_tri);
        PhaseState ic{{1.0}, {0.0}, 0.0};
        auto traj = integrate(sys, ic, 50.0, 1e-3);
        rep.trajectories.push_back({"spiral", check_reversibility(traj, sys, tol_close, 50.0)});
        out.push_back(std::move(rep));
    }

    return out;
}

}  // namespace tempus
