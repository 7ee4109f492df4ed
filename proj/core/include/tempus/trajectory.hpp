#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tempus {

// A point of phase space: coordinates q, momenta p, time t. q and p always
// have the same length.
struct PhaseState {
    std::vector<double> q;
    std::vector<double> p;
    double t = 0.0;

    std::size_t dim() const { return q.size(); }
    bool finite() const;

    // Flat (q..., p...) view used by the integrator.
    std::vector<double> to_vector() const;
    static PhaseState from_vector(const std::vector<double>& x, double t);
};

using VectorField = std::function<void(double t, const std::vector<double>& x,
                                       std::vector<double>& dxdt)>;

// A finite-dimensional dynamical system. `dim` is the phase-space dimension
// (length of the flat (q, p) vector, always even here).
struct DynamicalSystem {
    std::size_t dim = 0;
    VectorField vector_field;

    // Defaults to negating the momentum block; must be an involution.
    std::function<std::vector<double>(const std::vector<double>&)> reversal_involution;

    std::optional<std::function<double(const std::vector<double>&)>> hamiltonian;

    // Optional event function; the integrator locates its zero crossings by
    // bisection and splits steps there (piecewise-smooth fields).
    std::optional<std::function<double(const std::vector<double>&)>> event;

    // Field with the discontinuous branch frozen to the given event side
    // (+1 / -1). When present, every stage evaluation inside a substep uses
    // one branch, which keeps RK4 at full order across crossings.
    std::function<void(int side, double t, const std::vector<double>& x,
                       std::vector<double>& dxdt)>
        sided_field;

    // Indices into the flat (q, p) vector of angle-like coordinates; used by
    // reversibility detection for unbounded-angle escapes.
    std::vector<std::size_t> angle_indices;

    std::string name;

    std::vector<double> apply_involution(const std::vector<double>& x) const;
    void validate() const;
};

// Default involution: (q, p) -> (q, -p).
std::vector<double> negate_momentum_block(const std::vector<double>& x);

struct TrajectoryDiagnostics {
    double max_energy_drift = 0.0;       // max |H(t) - H(0)|
    double rel_energy_drift = 0.0;       // relative to |H(0)| when nonzero
    bool has_energy = false;
    bool singular_end = false;           // integration stopped early, e.g. a -> 0
    double end_time = 0.0;
};

struct Trajectory {
    std::vector<PhaseState> states;
    double step = 0.0;          // nominal step (signed grid spacing for fixed-step runs)
    std::string integrator_id;  // "rk4", "rk45"
    TrajectoryDiagnostics diagnostics;

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
    const PhaseState& front() const { return states.front(); }
    const PhaseState& back() const { return states.back(); }
    double t_begin() const { return states.front().t; }
    double t_end() const { return states.back().t; }

    // Linear interpolation of the flat state vector at time t.
    std::vector<double> interpolate(double t) const;
};

// Classic fixed-step RK4. The grid is uniform: the effective step is
// (t_end - t0)/n with n = round(|t_end - t0| / step). t_end < t0 integrates
// backward (signed step; the involution is never used here).
Trajectory integrate(const DynamicalSystem& system, const PhaseState& initial, double t_end,
                     double step);

// Embedded Dormand–Prince RK45 with absolute/relative error control; used for
// stiff cosmological epochs. Steps are not uniform.
struct AdaptiveOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-4;
    double max_step = 0.0;  // 0: unlimited
    // Optional clean-halt condition, checked per accepted step.
    std::function<bool(double t, const std::vector<double>& x)> stop;
};
Trajectory integrate_adaptive(const DynamicalSystem& system, const PhaseState& initial,
                              double t_end, const AdaptiveOptions& opts = {});

// Reflect the time grid about its midpoint and apply the reversal involution
// to every state. Involutive: time_reverse(time_reverse(T)) == T.
Trajectory time_reverse(const Trajectory& trajectory, const DynamicalSystem& system);

// Max-norm residual of the system equations along a trajectory, via central
// differences on the stored grid. Diagnoses whether a (possibly reversed)
// trajectory still satisfies the equation.
double equation_residual(const Trajectory& trajectory, const DynamicalSystem& system);

// CSV export: header `t,q0..,p0..`, 17 significant digits.
void write_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace tempus
