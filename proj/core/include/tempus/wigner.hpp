#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace tempus::wigner {

struct PhaseGrid {
    double q_min = -2.5;
    double p_min = -2.5;
    double dq = 0.0;
    double dp = 0.0;
    std::size_t nq = 0;
    std::size_t np = 0;

    static PhaseGrid centered(double half_width, std::size_t n);
    double q_at(std::size_t i) const { return q_min + (static_cast<double>(i) + 0.5) * dq; }
    double p_at(std::size_t j) const { return p_min + (static_cast<double>(j) + 0.5) * dp; }
    std::size_t size() const { return nq * np; }
    double cell_area() const { return dq * dp; }
};

// Hamiltonian on the grid plus its gradient (for transport).
struct PhaseHamiltonian {
    std::function<double(double q, double p)> h;
    std::function<double(double q, double p)> dh_dq;
    std::function<double(double q, double p)> dh_dp;
};

PhaseHamiltonian sho_hamiltonian();

// Gridded nonnegative quasi-probability; Riemann-sum mass 1. A grid cell is
// the resolution floor of the representation: "point-like" classical states
// are never narrower than one cell, i.e. dq*dp per cell plays the role of
// the model's hbar and the uncertainty floor is respected by construction.
struct WignerDensity {
    PhaseGrid grid;
    std::vector<double> values;  // row-major: index = i * np + j
    double sigma = 0.0;          // energy smoothing width

    double mass() const;
    double max_value() const;
    // Optional extra constants of motion (typed but not exercised in the
    // CSCO = H case).
    std::vector<std::function<double(double, double)>> extra_observables;
    std::vector<double> extra_quantum_numbers;
};

// Smoothed energy shell: values proportional to exp(-(H - omega)^2 / (2 sigma^2)),
// normalized. Throws EmptyShell when omega lies outside the attainable range
// and InvalidArgument when sigma under-resolves the grid
// (sigma < 2 |grad H| max(dq, dp) on the shell).
WignerDensity wigner_energy_shell(double omega, const PhaseHamiltonian& ham, double sigma,
                                  const PhaseGrid& grid);

// Mixture of shells weighted by probabilities on the omega grid.
WignerDensity wigner_mix(const std::vector<double>& weights,
                         const std::vector<WignerDensity>& shells);

struct TransportResult {
    double max_relative_change = 0.0;  // sup-norm change / peak density
    double mass_error = 0.0;
    WignerDensity advected;
};

struct TransportOptions {
    double step = 1e-2;
    std::size_t subsamples = 3;      // per-cell supersampling factor per axis
    double mass_floor = 1e-12;       // skip cells below floor * peak
    bool allow_escape = false;       // throw FlowEscapedGrid unless set
};

// Advects the density along Hamilton's equations for time t (RK4 per sample
// point), deposits with cloud-in-cell, and reports the sup-norm relative
// change; flow invariance of genuine shells shows up as a small change.
TransportResult shell_transport_invariance(const WignerDensity& density,
                                           const PhaseHamiltonian& ham, double t,
                                           const TransportOptions& opts = {});

// Fraction of mass within |H - omega| < width.
double mass_within_band(const WignerDensity& density, const PhaseHamiltonian& ham,
                        double omega, double width);

// Second moment of H - omega under the density (squared shell thickness).
double energy_second_moment(const WignerDensity& density, const PhaseHamiltonian& ham,
                            double omega);

}  // namespace tempus::wigner
