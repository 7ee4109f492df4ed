#pragma once

#include <cstdint>
#include <vector>

#include "tempus/cosmology.hpp"
#include "tempus/numerics.hpp"

namespace tempus::corkscrew {

// Reduced phase-space point (adot, phi, phidot); the scale factor is carried
// implicitly by the constraint.
struct ReducedPoint {
    double a_dot = 0.0;
    double phi = 0.0;
    double phi_dot = 0.0;
};

// Grain membership for the two symmetry axes (0, phi, 0) and (0, 0, phidot):
// max-norm distance below eps/2 in the two coordinates transverse to the
// axis, so each axis neighborhood has cross-section eps^2.
bool axis_membership(const ReducedPoint& p, double eps);

enum class ScanMode { AxisSet, SolutionTube, Dynamic };

struct MeasureScanConfig {
    double cube_side = 2.0;               // L
    std::vector<double> epsilons;
    std::size_t n_samples = 1'000'000;    // per epsilon
    std::uint64_t seed = 1;
    cosmo::FRWModel model;
    ScanMode mode = ScanMode::AxisSet;

    void validate() const;
};

struct MeasureScanRow {
    double epsilon = 0.0;
    double fraction = 0.0;
    double stderr_ = 0.0;
    double predicted = 0.0;
    std::size_t hits = 0;
};

struct MeasureScanResult {
    std::vector<MeasureScanRow> rows;
    LinearFit loglog_fit;  // slope of log(fraction) against log(eps)
};

// Monte Carlo fraction of the fuzzy axis set per epsilon; one sample stream
// evaluated against every epsilon, so fractions are monotone in eps for a
// fixed seed.
MeasureScanResult scan_axis_measure(const MeasureScanConfig& config);

// --- time-symmetric solution surfaces --------------------------------------

struct SurfacePolyline {
    int axis = 1;              // 1: (0,phi,0) even; 2: (0,0,phidot) odd
    double axis_coordinate = 0.0;
    std::vector<ReducedPoint> points;
};

struct SymmetricSurfaces {
    std::vector<SurfacePolyline> polylines;
    double cube_side = 0.0;
    double spacing = 0.0;          // recording spacing along trajectories
    std::size_t axis_points = 0;   // grid density per axis

    std::size_t total_points() const;
};

struct SurfaceBuildOptions {
    std::size_t axis_points = 200;   // trajectories per axis
    double spacing = 0.005;          // max-norm recording spacing
    double t_cap = 50.0;             // per-direction integration cap
    double step = 1e-3;
    double axis_cut = 0.02;          // skip |axis coordinate| below cut * L/2
};

// Propagates every axis grid point with evolve_cosmo and keeps the reduced
// trace plus its parity image; the two resulting families exhaust the
// time-symmetric solutions of the model.
SymmetricSurfaces build_symmetric_surfaces(const cosmo::FRWModel& model, double cube_side,
                                           const SurfaceBuildOptions& opts = {});

// Exact max-norm distance from a point to the stored polylines (segment-wise),
// capped at `radius` for efficiency; returns radius when nothing is closer.
class SurfaceIndex {
  public:
    SurfaceIndex(const SymmetricSurfaces& surfaces, double radius);
    double distance(const ReducedPoint& p) const;
    double radius() const { return radius_; }

  private:
    struct Segment {
        ReducedPoint a;
        ReducedPoint d;  // b - a
    };
    std::vector<Segment> segments_;
    std::vector<std::vector<std::uint32_t>> cells_;
    double cell_ = 0.0;
    double radius_ = 0.0;
    double origin_ = 0.0;
    int n_ = 0;
    std::size_t cell_of(double x, double y, double z) const;
};

// Fraction of cube samples within eps/2 of either surface, per epsilon.
MeasureScanResult scan_tube_measure(const MeasureScanConfig& config,
                                    const SymmetricSurfaces& surfaces);

// Builds surfaces and doubles the axis density until the smallest-epsilon
// fraction is stable to 5%, then runs the tube scan.
MeasureScanResult tube_scan_with_refinement(const MeasureScanConfig& config,
                                            SurfaceBuildOptions opts = {},
                                            int max_refinements = 3);

// --- dynamic census ---------------------------------------------------------

struct CensusResult {
    std::size_t n = 0;
    double empirical_fraction = 0.0;    // detect_cosmo_symmetry on evolved runs
    double predicted_fraction = 0.0;    // axis_membership on the same samples
    double combined_stderr = 0.0;
    bool agree_within_3se = false;
};

struct CensusOptions {
    double tol = 1e-4;        // detection tolerance; grain eps = 2 tol
    double t_span = 5.0;      // two-sided evolution span per direction
    double step = 1e-3;
};

CensusResult dynamic_symmetry_census(const MeasureScanConfig& config,
                                     const CensusOptions& opts = {});

}  // namespace tempus::corkscrew
