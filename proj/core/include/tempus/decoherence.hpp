#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace tempus::deco {

using Complex = std::complex<double>;

// Gauss–Legendre grid on the energy half-line truncated at omega_max; the
// truncation point is chosen so kernels decay below 1e-8 of their peak at
// the edge.
struct SpectralGrid {
    double omega_max = 40.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    static std::shared_ptr<const SpectralGrid> make(double omega_max, std::size_t n = 256);
    std::size_t size() const { return nodes.size(); }
    bool same_as(const SpectralGrid& other) const;
};

// Rank-one (separable) kernel K(w, w') = factor(w) * conj(factor(w')).
// Separable kernels admit exact Fourier oracles in nu = w - w' and are
// integrated on a dedicated composite panel grid sized from the feature
// scale and the requested times.
struct SeparableKernel {
    std::function<Complex(double)> factor;
    double feature_center = 0.0;
    double feature_scale = 1.0;
};

// Dense Hermitian kernel sampled on the grid nodes (row-major n x n).
using DenseKernel = std::vector<Complex>;

struct SpectralState {
    std::shared_ptr<const SpectralGrid> grid;
    std::vector<double> diag;  // rho(w) on grid nodes, integrates to 1
    std::optional<SeparableKernel> separable;
    std::optional<DenseKernel> dense;

    void validate() const;
};

struct SpectralObservable {
    std::shared_ptr<const SpectralGrid> grid;
    std::vector<double> diag;  // O(w) on grid nodes
    std::optional<SeparableKernel> separable;
    std::optional<DenseKernel> dense;

    void validate() const;
};

struct MeanValue {
    double value = 0.0;
    double imag_residual = 0.0;  // Hermiticity health check
};

// <O>(t) = int rho O dw + int int rho(w,w') O(w,w') exp(-i(w-w')t) dw dw'.
MeanValue mean_value(const SpectralState& state, const SpectralObservable& obs, double t);

// Diagonal contraction only: the Riemann–Lebesgue limit of <O>(t).
double equilibrium_mean(const SpectralState& state, const SpectralObservable& obs);

struct DecayCurve {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> envelope;   // D(t) = |<O>(t) - <O>_*|
    double twin_asymmetry = 0.0;    // max |D(t) - D(-t)|
    double max_imag_residual = 0.0;
};

// D(t) over a grid symmetric about 0, exhibiting decay in both time
// directions (the t-symmetric twins).
DecayCurve offdiag_envelope(const SpectralState& state, const SpectralObservable& obs,
                            const std::vector<double>& t_grid);

// Convenience: symmetric grid -t_max..t_max with `count` points (odd count
// includes 0).
std::vector<double> symmetric_time_grid(double t_max, std::size_t count);

struct PoleModel {
    std::vector<Complex> poles;
    std::vector<Complex> residues;  // optional weights, may be empty
};

// Decoherence time = 1 / |Im z| for the lower-half-plane pole closest to the
// real axis (ties broken toward the smallest |Re z|).
double decoherence_time_from_poles(const PoleModel& model);

enum class DecayForm { Exponential, Gaussian };

struct DecayFit {
    double rate = 0.0;  // exponential: D ~ exp(-rate |t|); gaussian: exp(-rate t^2)
    double r2 = 0.0;
    std::size_t n_points = 0;
};

// Least squares of log D on the window D/D(0) in [1e-3, 0.5], against |t| or
// t^2.
DecayFit fit_decoherence_time(const DecayCurve& curve, DecayForm form);

// --- canonical test states --------------------------------------------------

// State whose off-diagonal contribution decays exactly as exp(-gamma |t|)
// against the flat observable: the separable factor is a normalized
// Lorentzian line of HWHM gamma/2, whose autocorrelation is the width-gamma
// Lorentzian difference profile.
SpectralState lorentzian_state(double gamma, std::size_t grid_nodes = 256);

// Gaussian analogue: D(t)/D(0) = exp(-sigma^2 t^2 / 2).
SpectralState gaussian_state(double sigma, std::size_t grid_nodes = 256);

// Diagonal-only state on an 0..omega_max grid with a smooth normalized bump.
SpectralState diagonal_state(double omega_max, std::size_t grid_nodes = 256);

// Observable with O(w) = 1 and unit kernel factor on the matching grid.
SpectralObservable flat_observable(const std::shared_ptr<const SpectralGrid>& grid);

// Declared finite family certifying the weak limit: bounded smooth O(w) with
// unit kernels.
std::vector<SpectralObservable> standard_observable_family(
    const std::shared_ptr<const SpectralGrid>& grid);

// TRI pole model matching lorentzian_state(gamma): conjugate pairs at
// +-re_offset -+ i gamma.
PoleModel lorentzian_pole_model(double gamma, double re_offset = 0.5);

// Dense-kernel state built from a Gaussian difference profile on a compact
// grid; exercises the full 2-D tensor quadrature path.
SpectralState dense_gaussian_state(double sigma, std::size_t grid_nodes = 256);

}  // namespace tempus::deco
