#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tempus/trajectory.hpp"

namespace tempus::cosmo {

// FRW model with a minimally coupled neutral scalar field. Units: kappa = 1
// by default, so everything is in model units. The constraint and equations
// of motion are
//   adot^2 = kappa (phidot^2/2 + V(phi)) a^2 + (Lambda/3) a^2 - k
//   addot  = kappa a (V(phi) - phidot^2) + (Lambda/3) a
//   phiddot = -3 (adot/a) phidot - V'(phi)
struct FRWModel {
    int k = 1;                 // curvature: -1, 0, +1
    double field_mass = 1.0;   // m, for the default potential V = m^2 phi^2 / 2
    double kappa = 1.0;        // 8 pi G / 3
    double lambda = 0.0;       // cosmological constant

    // Optional overrides; default to the quadratic potential.
    std::function<double(double)> potential;
    std::function<double(double)> potential_prime;

    double v(double phi) const;
    double v_prime(double phi) const;
    void validate() const;
};

struct CosmoState {
    double a = 1.0;
    double a_dot = 0.0;
    double phi = 0.0;
    double phi_dot = 0.0;
    double t = 0.0;
};

// Type-I decomposition of the scalar-field stress-energy in the comoving
// tetrad: s0 = rho, s1 = s2 = s3 = P.
struct StressEnergyFRW {
    double rho = 0.0;
    double pressure = 0.0;
    double s0 = 0.0;
    double s[3] = {0.0, 0.0, 0.0};
};

StressEnergyFRW stress_energy(const CosmoState& state, const FRWModel& model);

// Dimensionless constraint residual; 0 on the constraint surface, 1 for a
// maximally violated state (e.g. an empty expanding universe).
double constraint_residual(const CosmoState& state, const FRWModel& model);

struct ConstraintRoot {
    double a = 0.0;
    int multiplicity = 1;  // positive real roots of the constraint in a
};

// Solve the Hamiltonian constraint for the scale factor given reduced
// coordinates (adot, phi, phidot); smallest positive root.
ConstraintRoot solve_constraint_for_a(double a_dot, double phi, double phi_dot,
                                      const FRWModel& model);

struct CosmoRun {
    Trajectory trajectory;           // q = (a, phi), p = (adot, phidot)
    std::vector<double> residuals;   // per recorded state
    double max_residual = 0.0;
    bool singular_end = false;
};

CosmoState state_at(const CosmoRun& run, std::size_t i);

struct EvolveOptions {
    double step = 1e-3;
    bool adaptive = false;   // RK45 for stiff epochs (near-singular starts)
    double max_step = 0.0;   // adaptive only; 0 = unlimited
    double drift_limit = 1e-5;  // throws ConstraintDrift beyond this
    double singular_fraction = 1e-6;  // stop once a < fraction * max(a) so far
};

CosmoRun evolve_cosmo(const CosmoState& state, const FRWModel& model, double t_end,
                      const EvolveOptions& opts = {});

// Incremental fixed-step RK4 driver over the FRW system; lets callers stream
// long runs without materializing a Trajectory.
class CosmoStepper {
  public:
    CosmoStepper(const FRWModel& model, const CosmoState& state, double step);
    // One step; returns false once the state stops being finite.
    bool advance();
    CosmoState state() const;

  private:
    const FRWModel* model_;
    double x_[4];
    double t_;
    double h_;
};

enum class Parity { Even, Odd };

struct CosmoSymmetry {
    double t_s = 0.0;
    Parity parity = Parity::Even;
    double residual = 0.0;
};

// Time-symmetry detection: candidates are adot zero crossings; the candidate
// must sit on an axis ((adot,phidot)=(0,0) even, (adot,phi)=(0,0) odd) within
// tol and the full reflection residual with the matching parity map must stay
// below tol.
std::optional<CosmoSymmetry> detect_cosmo_symmetry(const CosmoRun& run, double tol);

// Two-sided evolution around an initial condition: spans [t0 - t_back, t0 + t_fwd].
CosmoRun evolve_two_sided(const CosmoState& state, const FRWModel& model, double t_back,
                          double t_fwd, const EvolveOptions& opts = {});

// --- pure-radius (single dynamical variable) reduction ------------------

// One-dimensional model adot^2 = g(a); integrated as addot = g'(a)/2.
struct PureFRWModel {
    std::function<double(double)> squared_speed;                 // g(a)
    std::optional<std::function<double(double)>> d_squared_speed;  // g'(a)
};

struct TurningSymmetryReport {
    bool has_turning_point = false;
    bool generic_root = false;       // g'(a_S) != 0
    bool symmetric = false;          // a(t_S+t) = a(t_S-t) to tolerance
    bool monotone = false;           // no turning point inside the span
    double t_s = 0.0;
    double a_s = 0.0;
    double max_residual = 0.0;
    std::string note;
};

// Integrates through the turning point (when one exists) and verifies the
// reflection identity to 1e-8; flags degenerate (g'(a_S)=0) roots.
TurningSymmetryReport pure_frw_turning_symmetry(const PureFRWModel& model, double a_start,
                                                double t_span, double step = 1e-4,
                                                double tol = 1e-8);

// --- Big Bang surface instability ----------------------------------------

struct InstabilityStats {
    std::size_t n_samples = 0;
    double positive_fraction = 0.0;
    double mean_exponent = 0.0;
    std::vector<double> exponents;
};

// Samples constraint-satisfying states at a = delta, perturbs within the
// reduced coordinates by relative size delta, and measures the divergence of
// the pair over the sample's lifetime (capped at `window`). The exponent is
// the power-law index of separation growth in time-from-bang, which is the
// delta-stable instability measure for these short-lived model universes.
InstabilityStats big_bang_surface_instability(const FRWModel& model, std::size_t n_samples,
                                              std::uint64_t seed, double delta,
                                              double window = 1.0);

// --- Lyapunov variable -----------------------------------------------------

struct LyapunovReport {
    std::vector<double> t;
    std::vector<double> value;       // L = -adot
    bool premise_holds = true;       // addot <= 0 throughout
    bool monotone_nondecreasing = false;  // where the premise holds
    std::vector<std::pair<double, double>> accelerating_epochs;  // addot > 0
};

LyapunovReport lyapunov_variable(const CosmoRun& run, const FRWModel& model);

// --- dominant energy condition --------------------------------------------

struct DecReport {
    bool holds = false;
    double s0 = 0.0;
    double si = 0.0;
    double margin = 0.0;  // rho - |P|
};

DecReport dominant_energy_check(const CosmoState& state, const FRWModel& model);

// Same predicate through the Type-I eigenvalue route; used to cross-check.
bool dec_from_type_one(const StressEnergyFRW& se);

}  // namespace tempus::cosmo
