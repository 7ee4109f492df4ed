#include "tempus/decoherence.hpp"

#include <algorithm>
#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/quadrature.hpp"

namespace tempus::deco {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(double omega_max, std::size_t n) {
    if (omega_max <= 0.0) throw InvalidArgument("SpectralGrid: omega_max must be positive");
    auto grid = std::make_shared<SpectralGrid>();
    grid->omega_max = omega_max;
    GaussLegendre rule(n);
    rule.mapped(0.0, omega_max, grid->nodes, grid->weights);
    return grid;
}

bool SpectralGrid::same_as(const SpectralGrid& other) const {
    return omega_max == other.omega_max && nodes.size() == other.nodes.size();
}

namespace {

void validate_diag(const std::shared_ptr<const SpectralGrid>& grid,
                   const std::vector<double>& diag, bool is_state) {
    if (!grid) throw InvalidArgument("spectral object: missing grid");
    if (diag.size() != grid->size())
        throw DimensionMismatch("spectral object: diag size does not match grid");
    if (is_state) {
        std::vector<double> terms(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            if (diag[i] < 0.0) throw InvalidArgument("SpectralState: diag must be nonnegative");
            terms[i] = grid->weights[i] * diag[i];
        }
        double norm = pairwise_sum(terms);
        if (std::abs(norm - 1.0) > 1e-10)
            throw InvalidArgument("SpectralState: diag does not integrate to 1");
    }
}

void validate_kernels(const std::shared_ptr<const SpectralGrid>& grid,
                      const std::optional<SeparableKernel>& sep,
                      const std::optional<DenseKernel>& dense, bool require_edge_decay) {
    if (sep && dense)
        throw InvalidArgument("spectral object: separable and dense kernels are exclusive");
    if (sep) {
        if (!sep->factor) throw InvalidArgument("SeparableKernel: missing factor");
        if (sep->feature_scale <= 0.0)
            throw InvalidArgument("SeparableKernel: feature scale must be positive");
        double peak = std::abs(sep->factor(sep->feature_center));
        if (require_edge_decay && peak > 0.0) {
            double edge = std::max(std::abs(sep->factor(0.0)),
                                   std::abs(sep->factor(grid->omega_max)));
            if (edge > 1e-8 * peak)
                throw InvalidArgument("SeparableKernel: does not decay below 1e-8 at edges");
        }
    }
    if (dense) {
        const std::size_t n = grid->size();
        if (dense->size() != n * n)
            throw DimensionMismatch("DenseKernel: size must be n x n on the grid");
        double peak = 0.0;
        for (const auto& v : *dense) peak = std::max(peak, std::abs(v));
        double herm = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k)
                herm = std::max(herm,
                                std::abs((*dense)[j * n + k] - std::conj((*dense)[k * n + j])));
        if (peak > 0.0 && herm > 1e-12 * peak)
            throw InvalidArgument("DenseKernel: not Hermitian within 1e-12");
        if (require_edge_decay) {
            double edge = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                edge = std::max({edge, std::abs((*dense)[0 * n + k]),
                                 std::abs((*dense)[(n - 1) * n + k]),
                                 std::abs((*dense)[k * n + 0]),
                                 std::abs((*dense)[k * n + (n - 1)])});
            }
            if (peak > 0.0 && edge > 1e-8 * peak)
                throw InvalidArgument("DenseKernel: does not decay below 1e-8 at edges");
        }
    }
}

}  // namespace

void SpectralState::validate() const {
    validate_diag(grid, diag, true);
    validate_kernels(grid, separable, dense, true);
}

void SpectralObservable::validate() const {
    validate_diag(grid, diag, false);
    validate_kernels(grid, separable, dense, false);
}

namespace {

// Composite panel plan for the separable path: fine panels across the
// spectral feature, oscillation-limited panels elsewhere.
struct SeparablePlan {
    std::vector<double> x;
    std::vector<Complex> v;  // weight * product factor at x

    SeparablePlan(const SeparableKernel& a, const SeparableKernel& b, double omega_max,
                  double t_max) {
        const double feature = std::min(a.feature_scale, b.feature_scale);
        const double center =
            (a.feature_scale <= b.feature_scale) ? a.feature_center : b.feature_center;
        const double fine_half = 40.0 * feature;
        const double phase_cap = (t_max > 0.0) ? 2.5 / t_max : omega_max;
        const double fine_w = std::max(1e-9, std::min(0.5 * feature, phase_cap));
        double coarse_w = std::min(omega_max / 16.0, phase_cap);
        coarse_w = std::max(coarse_w, fine_w);

        const double lo = std::max(0.0, center - fine_half);
        const double hi = std::min(omega_max, center + fine_half);

        std::vector<double> w;
        auto append = [&](double za, double zb, double width) {
            if (zb - za < 1e-12) return;
            CompositeQuadrature q(za, zb, width);
            x.insert(x.end(), q.x.begin(), q.x.end());
            w.insert(w.end(), q.w.begin(), q.w.end());
        };
        append(0.0, lo, coarse_w);
        append(lo, hi, fine_w);
        append(hi, omega_max, coarse_w);

        v.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            v[i] = w[i] * a.factor(x[i]) * b.factor(x[i]);
    }

    Complex fourier(double t) const {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double c = std::cos(x[i] * t);
            double s = std::sin(x[i] * t);
            // e^{-i x t} = c - i s
            re += v[i].real() * c + v[i].imag() * s;
            im += v[i].imag() * c - v[i].real() * s;
        }
        return {re, im};
    }
};

// Effective off-diagonal product matrix on the grid for the dense path.
std::vector<Complex> product_matrix(const SpectralState& state, const SpectralObservable& obs) {
    const auto& grid = *state.grid;
    const std::size_t n = grid.size();
    std::vector<Complex> m(n * n, Complex{0.0, 0.0});

    auto value = [&](const std::optional<SeparableKernel>& sep,
                     const std::optional<DenseKernel>& dense, std::size_t j, std::size_t k,
                     std::vector<Complex>& cache, bool& cached) -> Complex {
        if (dense) return (*dense)[j * n + k];
        if (sep) {
            if (!cached) {
                cache.resize(n);
                for (std::size_t i = 0; i < n; ++i) cache[i] = sep->factor(grid.nodes[i]);
                cached = true;
            }
            return cache[j] * std::conj(cache[k]);
        }
        return {0.0, 0.0};
    };

    std::vector<Complex> cache_s, cache_o;
    bool cached_s = false, cached_o = false;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Complex rs = value(state.separable, state.dense, j, k, cache_s, cached_s);
            Complex os = value(obs.separable, obs.dense, j, k, cache_o, cached_o);
            m[j * n + k] = rs * os;
        }
    return m;
}

Complex dense_offdiag(const std::vector<Complex>& m, const SpectralGrid& grid, double t) {
    const std::size_t n = grid.size();
    std::vector<Complex> phase_pos(n);
    for (std::size_t k = 0; k < n; ++k) {
        double c = std::cos(grid.nodes[k] * t);
        double s = std::sin(grid.nodes[k] * t);
        phase_pos[k] = Complex{c, s} * grid.weights[k];  // w_k e^{+i w_k t}
    }
    Complex total{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        Complex inner{0.0, 0.0};
        const Complex* row = &m[j * n];
        for (std::size_t k = 0; k < n; ++k) inner += row[k] * phase_pos[k];
        total += std::conj(phase_pos[j]) * inner;
    }
    return total;
}

bool has_kernel(const SpectralState& s) {
    return s.separable.has_value() || s.dense.has_value();
}
bool has_kernel(const SpectralObservable& s) {
    return s.separable.has_value() || s.dense.has_value();
}

void require_same_grid(const SpectralState& state, const SpectralObservable& obs) {
    if (!state.grid || !obs.grid || !state.grid->same_as(*obs.grid))
        throw GridMismatch("state and observable live on different grids");
}

}  // namespace

double equilibrium_mean(const SpectralState& state, const SpectralObservable& obs) {
    require_same_grid(state, obs);
    const auto& grid = *state.grid;
    std::vector<double> terms(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        terms[i] = grid.weights[i] * state.diag[i] * obs.diag[i];
    return pairwise_sum(terms);
}

MeanValue mean_value(const SpectralState& state, const SpectralObservable& obs, double t) {
    require_same_grid(state, obs);
    MeanValue out;
    out.value = equilibrium_mean(state, obs);
    if (!has_kernel(state) || !has_kernel(obs)) return out;

    if (state.separable && obs.separable) {
        SeparablePlan plan(*state.separable, *obs.separable, state.grid->omega_max,
                           std::abs(t));
        Complex f = plan.fourier(t);
        out.value += std::norm(f);
        return out;
    }
    auto m = product_matrix(state, obs);
    Complex off = dense_offdiag(m, *state.grid, t);
    out.value += off.real();
    out.imag_residual = std::abs(off.imag());
    return out;
}

std::vector<double> symmetric_time_grid(double t_max, std::size_t count) {
    if (count < 3 || t_max <= 0.0) throw InvalidArgument("symmetric_time_grid: bad arguments");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = -t_max + 2.0 * t_max * static_cast<double>(i) / static_cast<double>(count - 1);
    return t;
}

DecayCurve offdiag_envelope(const SpectralState& state, const SpectralObservable& obs,
                            const std::vector<double>& t_grid) {
    require_same_grid(state, obs);
    if (t_grid.size() < 3) throw InvalidArgument("offdiag_envelope: need at least 3 times");
    const std::size_t n = t_grid.size();
    double t_span = std::max(std::abs(t_grid.front()), std::abs(t_grid.back()));
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(t_grid[i] + t_grid[n - 1 - i]) > 1e-12 * std::max(1.0, t_span))
            throw InvalidArgument("offdiag_envelope: time grid must be symmetric about 0");
    }

    DecayCurve curve;
    curve.t = t_grid;
    curve.mean.assign(n, 0.0);
    curve.envelope.assign(n, 0.0);
    const double eq = equilibrium_mean(state, obs);

    if (state.separable && obs.separable) {
        SeparablePlan plan(*state.separable, *obs.separable, state.grid->omega_max, t_span);
        parallel_for_chunks(n, [&](std::size_t i) {
            Complex f = plan.fourier(t_grid[i]);
            double off = std::norm(f);
            curve.mean[i] = eq + off;
            curve.envelope[i] = off;
        });
    } else if (has_kernel(state) && has_kernel(obs)) {
        auto m = product_matrix(state, obs);
        std::vector<double> imag(n, 0.0);
        parallel_for_chunks(n, [&](std::size_t i) {
            Complex off = dense_offdiag(m, *state.grid, t_grid[i]);
            curve.mean[i] = eq + off.real();
            curve.envelope[i] = std::abs(off.real());
            imag[i] = std::abs(off.imag());
        });
        curve.max_imag_residual = *std::max_element(imag.begin(), imag.end());
    } else {
        for (std::size_t i = 0; i < n; ++i) curve.mean[i] = eq;
    }

    for (std::size_t i = 0; i < n / 2; ++i)
        curve.twin_asymmetry = std::max(
            curve.twin_asymmetry, std::abs(curve.envelope[i] - curve.envelope[n - 1 - i]));
    return curve;
}

double decoherence_time_from_poles(const PoleModel& model) {
    const Complex* best = nullptr;
    for (const auto& z : model.poles) {
        if (z.imag() >= 0.0) continue;
        if (!best) {
            best = &z;
            continue;
        }
        double cur = std::abs(z.imag());
        double ref = std::abs(best->imag());
        if (cur < ref * (1.0 - 1e-12)) {
            best = &z;
        } else if (std::abs(cur - ref) <= 1e-12 * std::max(cur, ref) &&
                   std::abs(z.real()) < std::abs(best->real())) {
            best = &z;
        }
    }
    if (!best) throw NoLowerPole("decoherence_time_from_poles: no pole with Im z < 0");
    return 1.0 / std::abs(best->imag());
}

DecayFit fit_decoherence_time(const DecayCurve& curve, DecayForm form) {
    // Reference scale D(0): the envelope at the center of the symmetric grid.
    const std::size_t n = curve.t.size();
    double d0 = curve.envelope[n / 2];
    if (d0 <= 0.0) d0 = *std::max_element(curve.envelope.begin(), curve.envelope.end());
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
        double t = curve.t[i];
        double d = curve.envelope[i];
        if (t <= 0.0 || d <= 0.0 || d0 <= 0.0) continue;
        double rel = d / d0;
        if (rel < 1e-3 || rel > 0.5) continue;
        xs.push_back(form == DecayForm::Exponential ? t : t * t);
        ys.push_back(std::log(d));
    }
    if (xs.size() < 2) throw WindowEmpty("fit_decoherence_time: no samples in fit window");
    auto fit = linear_fit(xs, ys);
    DecayFit out;
    out.rate = -fit.slope;
    out.r2 = fit.r2;
    out.n_points = xs.size();
    return out;
}

// --- canonical states ---------------------------------------------------------

namespace {

std::vector<double> normalized_bump(const SpectralGrid& grid, double center, double width) {
    std::vector<double> diag(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double z = (grid.nodes[i] - center) / width;
        diag[i] = std::exp(-0.5 * z * z);
    }
    std::vector<double> terms(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) terms[i] = grid.weights[i] * diag[i];
    double norm = pairwise_sum(terms);
    for (auto& v : diag) v /= norm;
    return diag;
}

}  // namespace

SpectralState lorentzian_state(double gamma, std::size_t grid_nodes) {
    if (gamma <= 0.0) throw InvalidArgument("lorentzian_state: gamma must be positive");
    // Edge/peak ratio for a Lorentzian line at the center is (gamma/omega_max)^2;
    // 1.05e4 * gamma keeps it below 1e-8.
    const double omega_max = 1.05e4 * gamma;
    const double omega0 = 0.5 * omega_max;
    const double hwhm = 0.5 * gamma;
    SpectralState state;
    state.grid = SpectralGrid::make(omega_max, grid_nodes);
    state.diag = normalized_bump(*state.grid, omega0, omega_max / 10.0);
    SeparableKernel kernel;
    kernel.factor = [omega0, hwhm](double w) -> Complex {
        return (hwhm / kPi) / ((w - omega0) * (w - omega0) + hwhm * hwhm);
    };
    kernel.feature_center = omega0;
    kernel.feature_scale = hwhm;
    state.separable = std::move(kernel);
    state.validate();
    return state;
}

SpectralState gaussian_state(double sigma, std::size_t grid_nodes) {
    if (sigma <= 0.0) throw InvalidArgument("gaussian_state: sigma must be positive");
    const double omega_max = 10.0 * sigma;
    const double omega0 = 0.5 * omega_max;
    const double s = sigma / std::sqrt(2.0);
    SpectralState state;
    state.grid = SpectralGrid::make(omega_max, grid_nodes);
    state.diag = normalized_bump(*state.grid, omega0, sigma);
    SeparableKernel kernel;
    kernel.factor = [omega0, s](double w) -> Complex {
        double z = (w - omega0) / s;
        return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * kPi));
    };
    kernel.feature_center = omega0;
    kernel.feature_scale = s;
    state.separable = std::move(kernel);
    state.validate();
    return state;
}

SpectralState diagonal_state(double omega_max, std::size_t grid_nodes) {
    SpectralState state;
    state.grid = SpectralGrid::make(omega_max, grid_nodes);
    state.diag = normalized_bump(*state.grid, 0.5 * omega_max, omega_max / 8.0);
    state.validate();
    return state;
}

SpectralObservable flat_observable(const std::shared_ptr<const SpectralGrid>& grid) {
    SpectralObservable obs;
    obs.grid = grid;
    obs.diag.assign(grid->size(), 1.0);
    SeparableKernel kernel;
    kernel.factor = [](double) -> Complex { return {1.0, 0.0}; };
    kernel.feature_center = 0.5 * grid->omega_max;
    kernel.feature_scale = grid->omega_max;  // broad: never the limiting feature
    obs.separable = std::move(kernel);
    return obs;
}

std::vector<SpectralObservable> standard_observable_family(
    const std::shared_ptr<const SpectralGrid>& grid) {
    std::vector<SpectralObservable> family;
    auto with_diag = [&](auto f) {
        SpectralObservable obs = flat_observable(grid);
        for (std::size_t i = 0; i < grid->size(); ++i) obs.diag[i] = f(grid->nodes[i]);
        return obs;
    };
    const double wm = grid->omega_max;
    family.push_back(with_diag([](double) { return 1.0; }));
    family.push_back(with_diag([wm](double w) { return w / wm; }));
    family.push_back(with_diag([wm](double w) { return std::exp(-4.0 * w / wm); }));
    family.push_back(with_diag([wm](double w) { return std::cos(kPi * w / wm); }));
    return family;
}

PoleModel lorentzian_pole_model(double gamma, double re_offset) {
    PoleModel model;
    model.poles = {Complex{re_offset, -gamma}, Complex{-re_offset, -gamma},
                   Complex{re_offset, gamma}, Complex{-re_offset, gamma}};
    return model;
}

SpectralState dense_gaussian_state(double sigma, std::size_t grid_nodes) {
    if (sigma <= 0.0) throw InvalidArgument("dense_gaussian_state: sigma must be positive");
    const double omega_max = 10.0 * sigma;
    const double omega0 = 0.5 * omega_max;
    const double s = sigma / std::sqrt(2.0);
    SpectralState state;
    state.grid = SpectralGrid::make(omega_max, grid_nodes);
    state.diag = normalized_bump(*state.grid, omega0, sigma);
    const auto& nodes = state.grid->nodes;
    const std::size_t n = nodes.size();
    DenseKernel kernel(n * n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = (nodes[i] - omega0) / s;
        g[i] = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * kPi));
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) kernel[j * n + k] = Complex{g[j] * g[k], 0.0};
    state.dense = std::move(kernel);
    state.validate();
    return state;
}

}  // namespace tempus::deco
