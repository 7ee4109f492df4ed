#include "tempus/wigner.hpp"

#include <algorithm>
#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"

namespace tempus::wigner {

PhaseGrid PhaseGrid::centered(double half_width, std::size_t n) {
    if (half_width <= 0.0 || n < 8) throw InvalidArgument("PhaseGrid: bad parameters");
    PhaseGrid g;
    g.q_min = -half_width;
    g.p_min = -half_width;
    g.nq = n;
    g.np = n;
    g.dq = 2.0 * half_width / static_cast<double>(n);
    g.dp = 2.0 * half_width / static_cast<double>(n);
    return g;
}

PhaseHamiltonian sho_hamiltonian() {
    PhaseHamiltonian ham;
    ham.h = [](double q, double p) { return 0.5 * (q * q + p * p); };
    ham.dh_dq = [](double q, double) { return q; };
    ham.dh_dp = [](double, double p) { return p; };
    return ham;
}

double WignerDensity::mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_area();
}

double WignerDensity::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

WignerDensity wigner_energy_shell(double omega, const PhaseHamiltonian& ham, double sigma,
                                  const PhaseGrid& grid) {
    if (sigma <= 0.0) throw InvalidArgument("wigner_energy_shell: sigma must be positive");
    if (!ham.h) throw InvalidArgument("wigner_energy_shell: missing Hamiltonian");

    WignerDensity density;
    density.grid = grid;
    density.sigma = sigma;
    density.values.assign(grid.size(), 0.0);

    double h_min = 1e300, h_max = -1e300;
    double grad_check = 0.0;
    const double cell = std::max(grid.dq, grid.dp);
    for (std::size_t i = 0; i < grid.nq; ++i) {
        double q = grid.q_at(i);
        for (std::size_t j = 0; j < grid.np; ++j) {
            double p = grid.p_at(j);
            double h = ham.h(q, p);
            h_min = std::min(h_min, h);
            h_max = std::max(h_max, h);
            double z = (h - omega) / sigma;
            if (std::abs(z) < 40.0) {
                density.values[i * grid.np + j] = std::exp(-0.5 * z * z);
                if (std::abs(z) < 3.0 && ham.dh_dq && ham.dh_dp) {
                    double g = std::hypot(ham.dh_dq(q, p), ham.dh_dp(q, p));
                    grad_check = std::max(grad_check, g);
                }
            }
        }
    }
    if (omega < h_min || omega > h_max)
        throw EmptyShell("wigner_energy_shell: omega outside attainable energies");
    if (sigma < 2.0 * grad_check * cell)
        throw InvalidArgument("wigner_energy_shell: sigma under-resolves the grid");

    double m = density.mass();
    if (m <= 0.0) throw EmptyShell("wigner_energy_shell: shell carries no mass on the grid");
    for (auto& v : density.values) v /= m;
    return density;
}

WignerDensity wigner_mix(const std::vector<double>& weights,
                         const std::vector<WignerDensity>& shells) {
    if (weights.size() != shells.size() || shells.empty())
        throw WeightMismatch("wigner_mix: weights and shells disagree");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw WeightMismatch("wigner_mix: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw WeightMismatch("wigner_mix: weights must be normalized");

    WignerDensity mix;
    mix.grid = shells.front().grid;
    mix.sigma = shells.front().sigma;
    mix.values.assign(mix.grid.size(), 0.0);
    for (std::size_t s = 0; s < shells.size(); ++s) {
        const auto& shell = shells[s];
        if (shell.grid.nq != mix.grid.nq || shell.grid.np != mix.grid.np)
            throw WeightMismatch("wigner_mix: shells live on different grids");
        for (std::size_t i = 0; i < mix.values.size(); ++i)
            mix.values[i] += weights[s] * shell.values[i];
    }
    return mix;
}

namespace {

// One RK4 step of Hamilton's equations.
inline void hamilton_rk4(const PhaseHamiltonian& ham, double& q, double& p, double h) {
    auto fq = [&](double qq, double pp) { return ham.dh_dp(qq, pp); };
    auto fp = [&](double qq, double pp) { return -ham.dh_dq(qq, pp); };
    double k1q = fq(q, p), k1p = fp(q, p);
    double k2q = fq(q + 0.5 * h * k1q, p + 0.5 * h * k1p);
    double k2p = fp(q + 0.5 * h * k1q, p + 0.5 * h * k1p);
    double k3q = fq(q + 0.5 * h * k2q, p + 0.5 * h * k2p);
    double k3p = fp(q + 0.5 * h * k2q, p + 0.5 * h * k2p);
    double k4q = fq(q + h * k3q, p + h * k3p);
    double k4p = fp(q + h * k3q, p + h * k3p);
    q += (h / 6.0) * (k1q + 2.0 * (k2q + k3q) + k4q);
    p += (h / 6.0) * (k1p + 2.0 * (k2p + k3p) + k4p);
}

}  // namespace

TransportResult shell_transport_invariance(const WignerDensity& density,
                                           const PhaseHamiltonian& ham, double t,
                                           const TransportOptions& opts) {
    if (!ham.dh_dq || !ham.dh_dp)
        throw InvalidArgument("shell_transport_invariance: missing gradient");
    const auto& grid = density.grid;
    const double peak = density.max_value();
    const double floor = opts.mass_floor * peak;

    TransportResult result;
    result.advected.grid = grid;
    result.advected.sigma = density.sigma;
    result.advected.values.assign(grid.size(), 0.0);

    if (t == 0.0) {
        result.advected.values = density.values;
        return result;
    }

    const auto n_steps =
        static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(t) / opts.step)));
    const double h = t / static_cast<double>(n_steps);
    const std::size_t sub = std::max<std::size_t>(1, opts.subsamples);
    const double sub_frac = 1.0 / static_cast<double>(sub);

    const double q_lo = grid.q_min;
    const double q_hi = grid.q_min + grid.dq * static_cast<double>(grid.nq);
    const double p_lo = grid.p_min;
    const double p_hi = grid.p_min + grid.dp * static_cast<double>(grid.np);

    // Per-row accumulation buffers merged in row order keeps the deposit
    // deterministic under parallelism.
    std::vector<std::vector<double>> partial(grid.nq);
    std::vector<double> escaped(grid.nq, 0.0);

    parallel_for_chunks(grid.nq, [&](std::size_t i) {
        auto& local = partial[i];
        local.assign(grid.size(), 0.0);
        for (std::size_t j = 0; j < grid.np; ++j) {
            double v = density.values[i * grid.np + j];
            if (v <= floor) continue;
            double point_mass = v * grid.cell_area() * sub_frac * sub_frac;
            for (std::size_t si = 0; si < sub; ++si) {
                for (std::size_t sj = 0; sj < sub; ++sj) {
                    double q = grid.q_min +
                               (static_cast<double>(i) + (si + 0.5) * sub_frac) * grid.dq;
                    double p = grid.p_min +
                               (static_cast<double>(j) + (sj + 0.5) * sub_frac) * grid.dp;
                    for (std::size_t s = 0; s < n_steps; ++s) hamilton_rk4(ham, q, p, h);

                    // Cloud-in-cell deposit on cell centers.
                    double fq = (q - grid.q_min) / grid.dq - 0.5;
                    double fp = (p - grid.p_min) / grid.dp - 0.5;
                    if (q < q_lo || q >= q_hi || p < p_lo || p >= p_hi) {
                        escaped[i] += point_mass;
                        continue;
                    }
                    auto i0 = static_cast<long>(std::floor(fq));
                    auto j0 = static_cast<long>(std::floor(fp));
                    double wq = fq - static_cast<double>(i0);
                    double wp = fp - static_cast<double>(j0);
                    for (int di = 0; di <= 1; ++di) {
                        long ii = i0 + di;
                        if (ii < 0 || ii >= static_cast<long>(grid.nq)) continue;
                        for (int dj = 0; dj <= 1; ++dj) {
                            long jj = j0 + dj;
                            if (jj < 0 || jj >= static_cast<long>(grid.np)) continue;
                            double w = (di ? wq : 1.0 - wq) * (dj ? wp : 1.0 - wp);
                            local[static_cast<std::size_t>(ii) * grid.np +
                                  static_cast<std::size_t>(jj)] += w * point_mass;
                        }
                    }
                }
            }
        }
    });

    double lost = 0.0;
    for (double e : escaped) lost += e;
    if (lost > 1e-9 && !opts.allow_escape)
        throw FlowEscapedGrid("shell_transport_invariance: trajectories left the grid");

    for (std::size_t i = 0; i < grid.nq; ++i) {
        const auto& local = partial[i];
        for (std::size_t c = 0; c < local.size(); ++c) result.advected.values[c] += local[c];
    }
    for (auto& v : result.advected.values) v /= grid.cell_area();

    double change = 0.0;
    for (std::size_t c = 0; c < grid.size(); ++c)
        change = std::max(change, std::abs(result.advected.values[c] - density.values[c]));
    result.max_relative_change = (peak > 0.0) ? change / peak : 0.0;
    result.mass_error = std::abs(result.advected.mass() - density.mass());
    return result;
}

double mass_within_band(const WignerDensity& density, const PhaseHamiltonian& ham,
                        double omega, double width) {
    const auto& grid = density.grid;
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < grid.nq; ++i) {
        double q = grid.q_at(i);
        for (std::size_t j = 0; j < grid.np; ++j) {
            double v = density.values[i * grid.np + j];
            total += v;
            if (std::abs(ham.h(q, grid.p_at(j)) - omega) < width) inside += v;
        }
    }
    return (total > 0.0) ? inside / total : 0.0;
}

double energy_second_moment(const WignerDensity& density, const PhaseHamiltonian& ham,
                            double omega) {
    const auto& grid = density.grid;
    double m2 = 0.0, total = 0.0;
    for (std::size_t i = 0; i < grid.nq; ++i) {
        double q = grid.q_at(i);
        for (std::size_t j = 0; j < grid.np; ++j) {
            double v = density.values[i * grid.np + j];
            double dh = ham.h(q, grid.p_at(j)) - omega;
            m2 += v * dh * dh;
            total += v;
        }
    }
    return (total > 0.0) ? m2 / total : 0.0;
}

}  // namespace tempus::wigner
