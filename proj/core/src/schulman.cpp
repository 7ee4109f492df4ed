#include "tempus/schulman.hpp"

#include <algorithm>
#include <cmath>

#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/rng.hpp"

namespace tempus::branch {

void UrnPair::validate() const {
    if (n_b < 8 || n_a < n_b) throw InvalidArgument("UrnPair: need N_A >= N_B >= 8");
    if (lambda < 0.0 || lambda > 0.05)
        throw InvalidArgument("UrnPair: weak coupling requires lambda in [0, 0.05]");
    if (kick_fraction <= 0.0 || kick_fraction > 1.0)
        throw InvalidArgument("UrnPair: kick fraction must lie in (0, 1]");
}

double urn_equilibrium_entropy(std::size_t n_balls) {
    return log_binomial(static_cast<unsigned>(n_balls),
                        static_cast<unsigned>(n_balls / 2));
}

namespace {

// Entropy lookup S(n) = ln C(N, n) for one urn system.
std::vector<double> entropy_table(std::size_t n_balls) {
    std::vector<double> table(n_balls + 1);
    for (std::size_t n = 0; n <= n_balls; ++n)
        table[n] = log_binomial(static_cast<unsigned>(n_balls), static_cast<unsigned>(n));
    return table;
}

// One Ehrenfest move: a uniformly chosen ball switches urns.
inline void ehrenfest_move(std::size_t n_balls, std::size_t& n, Rng& rng) {
    if (rng.uniform01() * static_cast<double>(n_balls) < static_cast<double>(n))
        --n;
    else
        ++n;
}

// Coupling event: an energy packet pushes B toward its majority urn.
inline void kick_outward(std::size_t n_balls, std::size_t& n, std::size_t kick, Rng& rng) {
    bool toward_full = (2 * n > n_balls) || (2 * n == n_balls && rng.sign() > 0);
    if (toward_full)
        n = std::min(n_balls, n + kick);
    else
        n = (n > kick) ? n - kick : 0;
}

struct WindowStats {
    bool monotone = false;
    double worst_drop = 0.0;
    double threshold = 0.0;
};

// Coarse-grained monotonicity: windowed means must not drop by more than 4x
// the equilibrium windowed-fluctuation scale. The scale is estimated from
// the equilibrated last half and floored by the analytic value
// sqrt(tau_corr / window) (each urn contributes entropy variance ~1/2 with
// correlation time ~N/2, independent of N).
WindowStats windowed_monotonicity(const std::vector<double>& series, std::size_t window,
                                  double sigma_floor) {
    WindowStats out;
    if (series.size() < 2 * window) {
        out.monotone = true;
        return out;
    }
    std::vector<double> means;
    for (std::size_t start = 0; start + window <= series.size(); start += window) {
        double m = 0.0;
        for (std::size_t i = start; i < start + window; ++i) m += series[i];
        means.push_back(m / static_cast<double>(window));
    }
    std::vector<double> tail(means.begin() + means.size() / 2, means.end());
    double sigma = std::max(sample_std(tail), sigma_floor);
    out.threshold = 4.0 * std::max(sigma, 1e-12);
    for (std::size_t i = 0; i + 1 < means.size(); ++i)
        out.worst_drop = std::max(out.worst_drop, means[i] - means[i + 1]);
    out.monotone = out.worst_drop <= out.threshold;
    return out;
}

double mean_abs_displacement(const std::vector<double>& entropy, double equilibrium) {
    std::vector<double> dev(entropy.size());
    for (std::size_t i = 0; i < entropy.size(); ++i)
        dev[i] = std::abs(entropy[i] - equilibrium);
    return mean(dev);
}

}  // namespace

SchulmanResult schulman_sim(const UrnPair& pair, std::size_t steps, std::uint64_t seed,
                            Scenario scenario) {
    pair.validate();
    if (steps < 100) throw InvalidArgument("schulman_sim: need at least 100 steps");

    SchulmanResult result;
    const auto table_a = entropy_table(pair.n_a);
    const auto table_b = entropy_table(pair.n_b);

    if (scenario == Scenario::AsymmetricSizes) {
        Rng rng(derive_seed(seed, "schulman-asym"));
        std::size_t n_a = pair.n_a;      // far from equilibrium: all balls in urn 1
        std::size_t n_b = pair.n_b / 2;  // equilibrium
        const auto kick = static_cast<std::size_t>(
            std::max(1.0, std::round(pair.kick_fraction * static_cast<double>(pair.n_b))));

        result.s_a.reserve(steps + 1);
        result.s_b.reserve(steps + 1);
        result.s_composite.reserve(steps + 1);
        for (std::size_t s = 0; s <= steps; ++s) {
            result.s_a.push_back(table_a[n_a]);
            result.s_b.push_back(table_b[n_b]);
            result.s_composite.push_back(table_a[n_a] + table_b[n_b]);
            if (s == steps) break;
            ehrenfest_move(pair.n_a, n_a, rng);
            if (rng.bernoulli(pair.lambda))
                kick_outward(pair.n_b, n_b, kick, rng);
            else
                ehrenfest_move(pair.n_b, n_b, rng);
        }

        const std::size_t window = std::max(pair.n_a, steps / 10);
        const double tau_corr = 0.5 * static_cast<double>(std::max(pair.n_a, pair.n_b));
        const double sigma_floor = std::sqrt(tau_corr / static_cast<double>(window));
        auto stats = windowed_monotonicity(result.s_composite, window, sigma_floor);
        result.composite_monotone = stats.monotone;
        result.worst_window_drop = stats.worst_drop;
        result.drop_threshold = stats.threshold;

        // Displacement test against the uncoupled fluctuation scale.
        const double s_b_eq = urn_equilibrium_entropy(pair.n_b);
        result.displacement_statistic = mean_abs_displacement(result.s_b, s_b_eq);
        const std::size_t n_ref = 20;
        std::vector<double> baseline(n_ref);
        for (std::size_t r = 0; r < n_ref; ++r) {
            Rng ref_rng(derive_seed(derive_seed(seed, "schulman-uncoupled"), r));
            std::size_t n = pair.n_b / 2;
            std::vector<double> s_series(steps + 1);
            for (std::size_t s = 0; s <= steps; ++s) {
                s_series[s] = table_b[n];
                if (s < steps) ehrenfest_move(pair.n_b, n, ref_rng);
            }
            baseline[r] = mean_abs_displacement(s_series, s_b_eq);
        }
        double base_mean = mean(baseline);
        double base_std = sample_std(baseline);
        result.displacement_threshold = base_mean + 3.0 * base_std;
        result.displacement_detected =
            result.displacement_statistic > result.displacement_threshold;
        return result;
    }

    // Mirror scenario: A forward, B an independent clone read backward.
    Rng rng_a(derive_seed(seed, "schulman-mirror-a"));
    Rng rng_b(derive_seed(seed, "schulman-mirror-b"));
    std::size_t n_a = pair.n_a;
    std::size_t n_b = pair.n_b;
    std::vector<double> s_a(steps + 1), s_b_forward(steps + 1);
    for (std::size_t s = 0; s <= steps; ++s) {
        s_a[s] = table_a[n_a];
        s_b_forward[s] = table_b[n_b];
        if (s == steps) break;
        ehrenfest_move(pair.n_a, n_a, rng_a);
        ehrenfest_move(pair.n_b, n_b, rng_b);
    }
    result.s_a = s_a;
    result.s_b.resize(steps + 1);
    for (std::size_t s = 0; s <= steps; ++s) result.s_b[s] = s_b_forward[steps - s];
    result.s_composite.resize(steps + 1);
    for (std::size_t s = 0; s <= steps; ++s)
        result.s_composite[s] = result.s_a[s] + result.s_b[s];

    // Composite statistics symmetric under time reversal + A/B swap: compare
    // A's forward increments with B's swap-reversed ones (B forward again).
    // Ehrenfest increments decorrelate over ~N/2 steps; thin accordingly so
    // the KS null distribution applies.
    const std::size_t stride = std::max<std::size_t>(1, std::max(pair.n_a, pair.n_b) / 2);
    std::vector<double> inc_a, inc_b;
    for (std::size_t s = 0; s < steps; s += stride) {
        inc_a.push_back(s_a[s + 1] - s_a[s]);
        inc_b.push_back(s_b_forward[s + 1] - s_b_forward[s]);
    }
    auto ks = ks_two_sample(inc_a, inc_b);
    result.ks_statistic = ks.statistic;
    result.ks_p_value = ks.p_value;
    result.mirror_symmetric = ks.p_value >= 0.05;
    return result;
}

}  // namespace tempus::branch
