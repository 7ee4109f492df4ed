#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tempus/trajectory.hpp"

namespace tempus {

enum class Reversibility { Reversible, Irreversible, Undetermined };

const char* to_string(Reversibility r);

struct ReversibilityReport {
    Reversibility verdict = Reversibility::Undetermined;
    std::optional<double> period;  // present iff Reversible
    std::string reason;
};

// Test of time-reversal invariance of the *equation*: at random phase points x,
// R(F(R(x))) must equal -F(x) within tol, with R the reversal involution.
bool check_time_reversal_invariance(const DynamicalSystem& system, std::size_t samples,
                                    std::uint64_t seed, double tol = 1e-9,
                                    double box_half_width = 1.0);

struct ReversibilityOptions {
    double escape_norm_factor = 1e3;   // |x| > factor * initial norm -> escape
    double max_angle_advance = 4.0 * 3.14159265358979323846;
    double alignment_min = 0.99;       // velocity-direction cosine at returns
};

// Verdict for a single solution: closed curve (Reversible, with period),
// escape/attractor (Irreversible), or Undetermined on this horizon.
ReversibilityReport check_reversibility(const Trajectory& trajectory,
                                        const DynamicalSystem& system, double tol_close,
                                        double t_horizon,
                                        const ReversibilityOptions& opts = {});

// Parity map for symmetry matching: +1 entries are even about t_S, -1 odd.
// Defaults to coordinates even, momenta odd.
std::vector<int> default_parity(std::size_t dim);

struct TimeSymmetry {
    double t_s = 0.0;
    double residual = 0.0;
};

// Max-norm residual of f(t_s+τ) - M f(t_s-τ) over the maximal window centered
// at t_s, probing offsets on the trajectory grid (at most max_offsets of
// them, always including the window edge).
double reflection_residual(const Trajectory& trajectory, double t_s,
                           const std::vector<int>& parity, std::size_t max_offsets = 4096);

// Search for a symmetry center t_S with f(t_S+τ) = M f(t_S-τ) on the maximal
// window around each candidate; grid scan plus golden-section refinement.
// Returns nothing when no candidate meets tol. Requires at least 16 samples
// on each side of some candidate.
std::optional<TimeSymmetry> find_time_symmetry(const Trajectory& trajectory, double tol,
                                               const std::vector<int>& parity = {});

struct TrajectoryVerdict {
    std::string label;
    ReversibilityReport report;
};

struct ClassificationReport {
    std::string system;  // "a".."d"
    bool tri = false;
    std::vector<TrajectoryVerdict> trajectories;
    std::optional<double> t_symmetry;
    double tol_tri = 0.0;
    double tol_close = 0.0;
};

// Reproduces the four-system taxonomy:
//   a: TRI + reversible          b: TRI, mixed per trajectory
//   c: not TRI + reversible      d: not TRI + irreversible
std::vector<ClassificationReport> classify_catalog(std::uint64_t seed = 20260808u);

}  // namespace tempus
