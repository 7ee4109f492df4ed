#include "tempus/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tempus/errors.hpp"

namespace tempus {

bool PhaseState::finite() const {
    for (double v : q)
        if (!std::isfinite(v)) return false;
    for (double v : p)
        if (!std::isfinite(v)) return false;
    return std::isfinite(t);
}

std::vector<double> PhaseState::to_vector() const {
    std::vector<double> x;
    x.reserve(q.size() + p.size());
    x.insert(x.end(), q.begin(), q.end());
    x.insert(x.end(), p.begin(), p.end());
    return x;
}

PhaseState PhaseState::from_vector(const std::vector<double>& x, double t) {
    PhaseState s;
    std::size_t half = x.size() / 2;
    s.q.assign(x.begin(), x.begin() + half);
    s.p.assign(x.begin() + half, x.end());
    s.t = t;
    return s;
}

std::vector<double> negate_momentum_block(const std::vector<double>& x) {
    std::vector<double> y = x;
    std::size_t half = x.size() / 2;
    for (std::size_t i = half; i < x.size(); ++i) y[i] = -y[i];
    return y;
}

std::vector<double> DynamicalSystem::apply_involution(const std::vector<double>& x) const {
    if (reversal_involution) return reversal_involution(x);
    return negate_momentum_block(x);
}

void DynamicalSystem::validate() const {
    if (dim == 0 || dim % 2 != 0) throw InvalidArgument("DynamicalSystem: dim must be even, positive");
    if (!vector_field) throw InvalidArgument("DynamicalSystem: missing vector field");
}

std::vector<double> Trajectory::interpolate(double t) const {
    if (states.empty()) throw InvalidArgument("Trajectory::interpolate: empty trajectory");
    // Backward runs carry a descending grid.
    const bool ascending = states.back().t >= states.front().t;
    const double t0 = ascending ? states.front().t : states.back().t;
    const double t1 = ascending ? states.back().t : states.front().t;
    if (t <= t0) return (ascending ? states.front() : states.back()).to_vector();
    if (t >= t1) return (ascending ? states.back() : states.front()).to_vector();
    // Binary search for the bracketing pair.
    std::size_t lo = 0, hi = states.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if ((states[mid].t <= t) == ascending)
            lo = mid;
        else
            hi = mid;
    }
    const auto a = states[lo].to_vector();
    const auto b = states[hi].to_vector();
    double u = (t - states[lo].t) / (states[hi].t - states[lo].t);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + u * (b[i] - a[i]);
    return out;
}

namespace {

bool all_finite(const std::vector<double>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

// One classic RK4 step from (t, x) with signed step h.
void rk4_step(const VectorField& f, double t, const std::vector<double>& x, double h,
              std::vector<double>& out, std::vector<double>& k1, std::vector<double>& k2,
              std::vector<double>& k3, std::vector<double>& k4, std::vector<double>& tmp) {
    const std::size_t n = x.size();
    f(t, x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    f(t + h, tmp, k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

// RK4 step evaluating the field on one frozen branch.
void rk4_step_sided(const DynamicalSystem& sys, int side, double t,
                    const std::vector<double>& x, double h, std::vector<double>& out,
                    std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
                    std::vector<double>& k4, std::vector<double>& tmp) {
    if (sys.sided_field) {
        auto f = [&sys, side](double tt, const std::vector<double>& xx,
                              std::vector<double>& dd) { sys.sided_field(side, tt, xx, dd); };
        rk4_step(f, t, x, h, out, k1, k2, k3, k4, tmp);
    } else {
        rk4_step(sys.vector_field, t, x, h, out, k1, k2, k3, k4, tmp);
    }
}

// Advance across [t, t+h], splitting at event zero crossings (bisection on
// the crossing time to 1e-10 of the step) and switching the frozen branch at
// each crossing. Only the endpoint is reported.
void advance_with_events(const DynamicalSystem& sys, double t, const std::vector<double>& x,
                         double h, int side, int depth, std::vector<double>& out,
                         std::vector<double>& k1, std::vector<double>& k2,
                         std::vector<double>& k3, std::vector<double>& k4,
                         std::vector<double>& tmp) {
    rk4_step_sided(sys, side, t, x, h, out, k1, k2, k3, k4, tmp);
    if (!sys.event || depth <= 0) return;

    const auto& ev = *sys.event;
    double e1 = ev(out);
    if (e1 == 0.0 || (e1 > 0 ? +1 : -1) == side) return;

    // Crossing inside the step: bisect on the substep length. lo stays on the
    // incoming side.
    double lo = 0.0, hi = h;
    std::vector<double> probe;
    for (int it = 0; it < 80 && std::abs(hi - lo) > 1e-10 * std::abs(h); ++it) {
        double m = 0.5 * (lo + hi);
        rk4_step_sided(sys, side, t, x, m, probe, k1, k2, k3, k4, tmp);
        double em = ev(probe);
        if (em != 0.0 && (em > 0 ? +1 : -1) == side)
            lo = m;
        else
            hi = m;
    }
    rk4_step_sided(sys, side, t, x, lo, probe, k1, k2, k3, k4, tmp);
    // Continue on the outgoing branch; the leftover sliver on the incoming
    // side is below the bisection tolerance.
    advance_with_events(sys, t + lo, probe, h - lo, -side, depth - 1, out, k1, k2, k3, k4,
                        tmp);
}

void rk4_step_with_events(const DynamicalSystem& sys, double t, const std::vector<double>& x,
                          double h, std::vector<double>& out, std::vector<double>& k1,
                          std::vector<double>& k2, std::vector<double>& k3,
                          std::vector<double>& k4, std::vector<double>& tmp) {
    if (!sys.event) {
        rk4_step(sys.vector_field, t, x, h, out, k1, k2, k3, k4, tmp);
        return;
    }
    double e0 = (*sys.event)(x);
    int side = (e0 >= 0.0) ? +1 : -1;
    advance_with_events(sys, t, x, h, side, 8, out, k1, k2, k3, k4, tmp);
}

}  // namespace

Trajectory integrate(const DynamicalSystem& system, const PhaseState& initial, double t_end,
                     double step) {
    system.validate();
    if (step <= 0.0) throw InvalidArgument("integrate: step must be positive");
    if (t_end == initial.t) throw InvalidArgument("integrate: t_end equals initial time");
    if (initial.dim() * 2 != system.dim)
        throw DimensionMismatch("integrate: state dimension does not match system");
    if (!initial.finite()) throw NonFinite("integrate: initial state not finite", initial.t);

    const double span = t_end - initial.t;
    const auto n_steps = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(std::abs(span) / step)));
    const double h = span / static_cast<double>(n_steps);

    Trajectory traj;
    traj.step = h;
    traj.integrator_id = "rk4";
    traj.states.reserve(n_steps + 1);
    traj.states.push_back(initial);

    double h0 = 0.0;
    bool has_energy = static_cast<bool>(system.hamiltonian);
    std::vector<double> x = initial.to_vector();
    if (has_energy) h0 = (*system.hamiltonian)(x);
    traj.diagnostics.has_energy = has_energy;

    std::vector<double> out, k1, k2, k3, k4, tmp(system.dim);
    k1.resize(system.dim);
    k2.resize(system.dim);
    k3.resize(system.dim);
    k4.resize(system.dim);

    for (std::size_t i = 0; i < n_steps; ++i) {
        double t = initial.t + h * static_cast<double>(i);
        rk4_step_with_events(system, t, x, h, out, k1, k2, k3, k4, tmp);
        if (!all_finite(out))
            throw NonFinite("integrate: state blew up", t);
        x = out;
        double t_next = (i + 1 == n_steps) ? t_end : initial.t + h * static_cast<double>(i + 1);
        traj.states.push_back(PhaseState::from_vector(x, t_next));
        if (has_energy) {
            double drift = std::abs((*system.hamiltonian)(x)-h0);
            traj.diagnostics.max_energy_drift = std::max(traj.diagnostics.max_energy_drift, drift);
        }
    }
    if (has_energy && h0 != 0.0)
        traj.diagnostics.rel_energy_drift = traj.diagnostics.max_energy_drift / std::abs(h0);
    traj.diagnostics.end_time = traj.states.back().t;
    return traj;
}

Trajectory integrate_adaptive(const DynamicalSystem& system, const PhaseState& initial,
                              double t_end, const AdaptiveOptions& opts) {
    system.validate();
    if (t_end == initial.t) throw InvalidArgument("integrate_adaptive: empty span");
    if (initial.dim() * 2 != system.dim)
        throw DimensionMismatch("integrate_adaptive: dimension mismatch");

    // Dormand–Prince 5(4) coefficients.
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const double dir = (t_end > initial.t) ? 1.0 : -1.0;
    const std::size_t n = system.dim;
    std::vector<double> x = initial.to_vector();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), x5(n);

    Trajectory traj;
    traj.integrator_id = "rk45";
    traj.step = opts.initial_step;
    traj.states.push_back(initial);

    double h0_energy = 0.0;
    bool has_energy = static_cast<bool>(system.hamiltonian);
    if (has_energy) h0_energy = (*system.hamiltonian)(x);
    traj.diagnostics.has_energy = has_energy;

    double t = initial.t;
    double h = dir * std::abs(opts.initial_step);
    const auto& f = system.vector_field;
    f(t, x, k1);

    const std::size_t max_steps = 50'000'000;
    for (std::size_t it = 0; it < max_steps; ++it) {
        if (dir * (t - t_end) >= 0.0) break;
        if (dir * (t + h - t_end) > 0.0) h = t_end - t;
        if (opts.max_step > 0.0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;

        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * a21 * k1[i];
        f(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        f(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            x5[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, x5, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double scale = opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
            err = std::max(err, std::abs(e) / scale);
        }

        if (err <= 1.0) {
            t += h;
            x = x5;
            k1 = k7;  // FSAL
            if (!all_finite(x)) throw NonFinite("integrate_adaptive: state blew up", t);
            traj.states.push_back(PhaseState::from_vector(x, t));
            if (has_energy) {
                double drift = std::abs((*system.hamiltonian)(x)-h0_energy);
                traj.diagnostics.max_energy_drift =
                    std::max(traj.diagnostics.max_energy_drift, drift);
            }
            if (opts.stop && opts.stop(t, x)) {
                traj.diagnostics.singular_end = true;
                break;
            }
        }
        double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw NonFinite("integrate_adaptive: step underflow", t);
    }

    if (has_energy && h0_energy != 0.0)
        traj.diagnostics.rel_energy_drift =
            traj.diagnostics.max_energy_drift / std::abs(h0_energy);
    traj.diagnostics.end_time = traj.states.back().t;
    return traj;
}

Trajectory time_reverse(const Trajectory& trajectory, const DynamicalSystem& system) {
    if (trajectory.empty()) throw InvalidArgument("time_reverse: empty trajectory");
    Trajectory out;
    out.step = trajectory.step;
    out.integrator_id = trajectory.integrator_id;
    out.diagnostics = trajectory.diagnostics;
    out.states.reserve(trajectory.size());
    const double ta = trajectory.t_begin();
    const double tb = trajectory.t_end();
    for (auto it = trajectory.states.rbegin(); it != trajectory.states.rend(); ++it) {
        auto flipped = system.apply_involution(it->to_vector());
        PhaseState s = PhaseState::from_vector(flipped, ta + (tb - it->t));
        out.states.push_back(std::move(s));
    }
    return out;
}

double equation_residual(const Trajectory& trajectory, const DynamicalSystem& system) {
    if (trajectory.size() < 3) throw InvalidArgument("equation_residual: too few samples");
    double worst = 0.0;
    std::vector<double> fx(system.dim);
    for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
        const auto xm = trajectory.states[i - 1].to_vector();
        const auto x0 = trajectory.states[i].to_vector();
        const auto xp = trajectory.states[i + 1].to_vector();
        double dt = trajectory.states[i + 1].t - trajectory.states[i - 1].t;
        system.vector_field(trajectory.states[i].t, x0, fx);
        for (std::size_t j = 0; j < system.dim; ++j) {
            double deriv = (xp[j] - xm[j]) / dt;
            worst = std::max(worst, std::abs(deriv - fx[j]));
        }
    }
    return worst;
}

void write_csv(const Trajectory& trajectory, std::ostream& out) {
    if (trajectory.empty()) return;
    const std::size_t d = trajectory.front().dim();
    out << "t";
    for (std::size_t i = 0; i < d; ++i) out << ",q" << i;
    for (std::size_t i = 0; i < d; ++i) out << ",p" << i;
    out << "\n";
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const auto& s : trajectory.states) {
        emit(s.t);
        for (double v : s.q) {
            out << ',';
            emit(v);
        }
        for (double v : s.p) {
            out << ',';
            emit(v);
        }
        out << "\n";
    }
}

}  // namespace tempus
