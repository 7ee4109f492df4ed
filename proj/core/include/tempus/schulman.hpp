#pragma once

#include <cstdint>
#include <vector>

namespace tempus::branch {

// Two weakly coupled Ehrenfest urn systems; the workable minimal setting for
// the two-subuniverse scenarios (size asymmetry and mirrored arrows).
struct UrnPair {
    std::size_t n_a = 200;
    std::size_t n_b = 20;
    double lambda = 0.01;        // coupling probability per step
    double kick_fraction = 0.25;  // balls moved per coupling event, as a share of N_B

    void validate() const;
};

enum class Scenario { AsymmetricSizes, Mirror };

struct SchulmanResult {
    std::vector<double> s_a;         // Boltzmann entropy of A per step
    std::vector<double> s_b;
    std::vector<double> s_composite;

    // AsymmetricSizes verdicts.
    bool composite_monotone = false;     // coarse-grained windowed means
    double worst_window_drop = 0.0;
    double drop_threshold = 0.0;
    bool displacement_detected = false;  // B pushed off equilibrium by coupling
    double displacement_statistic = 0.0;
    double displacement_threshold = 0.0;

    // Mirror verdicts.
    bool mirror_symmetric = false;
    double ks_statistic = 0.0;
    double ks_p_value = 1.0;
};

// AsymmetricSizes: A starts all-in-one-urn, B at equilibrium; coupling events
// (probability lambda per step) push B toward its majority urn, modelling the
// incoming energy packet. Mirror: B evolves as an independent clone of A and
// its trajectory is read backward, giving opposed arrows; the verdict is a
// KS test between A's forward entropy increments and B's reversed ones.
SchulmanResult schulman_sim(const UrnPair& pair, std::size_t steps, std::uint64_t seed,
                            Scenario scenario);

double urn_equilibrium_entropy(std::size_t n_balls);

}  // namespace tempus::branch
