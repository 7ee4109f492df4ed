#include "tempus/corkscrew.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tempus/errors.hpp"
#include "tempus/rng.hpp"

namespace tempus::corkscrew {

bool axis_membership(const ReducedPoint& p, double eps) {
    if (eps <= 0.0) throw InvalidArgument("axis_membership: eps must be positive");
    const double r = 0.5 * eps;
    bool near_axis1 = std::abs(p.a_dot) < r && std::abs(p.phi_dot) < r;
    bool near_axis2 = std::abs(p.a_dot) < r && std::abs(p.phi) < r;
    return near_axis1 || near_axis2;
}

void MeasureScanConfig::validate() const {
    if (cube_side <= 0.0) throw InvalidArgument("MeasureScanConfig: cube side must be positive");
    if (epsilons.empty()) throw InvalidArgument("MeasureScanConfig: no epsilons");
    for (double e : epsilons) {
        if (e <= 0.0) throw InvalidArgument("MeasureScanConfig: eps must be positive");
        if (mode != ScanMode::SolutionTube && e >= cube_side / 4.0)
            throw InvalidArgument("MeasureScanConfig: eps must be below L/4");
    }
    if (n_samples < 10'000) throw InvalidArgument("MeasureScanConfig: n_samples >= 1e4");
}

namespace {

constexpr std::size_t kChunk = 65536;

void fit_loglog(MeasureScanResult& result) {
    std::vector<double> lx, ly;
    for (const auto& row : result.rows) {
        if (row.fraction > 0.0) {
            lx.push_back(std::log(row.epsilon));
            ly.push_back(std::log(row.fraction));
        }
    }
    if (lx.size() >= 2) result.loglog_fit = linear_fit(lx, ly);
}

}  // namespace

MeasureScanResult scan_axis_measure(const MeasureScanConfig& config) {
    config.validate();
    const double half = 0.5 * config.cube_side;
    const std::size_t n_eps = config.epsilons.size();
    const auto n_chunks = (config.n_samples + kChunk - 1) / kChunk;

    std::vector<std::vector<std::size_t>> counts(n_chunks,
                                                 std::vector<std::size_t>(n_eps, 0));
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        Rng rng(derive_seed(config.seed, c));
        std::size_t lo = c * kChunk;
        std::size_t hi = std::min(config.n_samples, lo + kChunk);
        auto& local = counts[c];
        for (std::size_t s = lo; s < hi; ++s) {
            ReducedPoint p{rng.uniform(-half, half), rng.uniform(-half, half),
                           rng.uniform(-half, half)};
            for (std::size_t e = 0; e < n_eps; ++e)
                if (axis_membership(p, config.epsilons[e])) ++local[e];
        }
    });

    MeasureScanResult result;
    for (std::size_t e = 0; e < n_eps; ++e) {
        std::size_t hits = 0;
        for (std::size_t c = 0; c < n_chunks; ++c) hits += counts[c][e];
        MeasureScanRow row;
        row.epsilon = config.epsilons[e];
        row.hits = hits;
        row.fraction = static_cast<double>(hits) / static_cast<double>(config.n_samples);
        row.stderr_ = binomial_stderr(row.fraction, config.n_samples);
        double r = row.epsilon / config.cube_side;
        row.predicted = 2.0 * r * r;
        if (hits < 30)
            throw InsufficientHits("scan_axis_measure: fewer than 30 hits at eps=" +
                                   std::to_string(row.epsilon));
        result.rows.push_back(row);
    }
    fit_loglog(result);
    return result;
}

// --- surfaces ----------------------------------------------------------------

std::size_t SymmetricSurfaces::total_points() const {
    std::size_t n = 0;
    for (const auto& pl : polylines) n += pl.points.size();
    return n;
}

namespace {

ReducedPoint mirror_point(const ReducedPoint& p, int axis) {
    // axis 1 (even in phi):   (adot, phi, phidot) -> (-adot,  phi, -phidot)
    // axis 2 (odd in phi):    (adot, phi, phidot) -> (-adot, -phi,  phidot)
    if (axis == 1) return ReducedPoint{-p.a_dot, p.phi, -p.phi_dot};
    return ReducedPoint{-p.a_dot, -p.phi, p.phi_dot};
}

double max_norm3(const ReducedPoint& a, const ReducedPoint& b) {
    return std::max({std::abs(a.a_dot - b.a_dot), std::abs(a.phi - b.phi),
                     std::abs(a.phi_dot - b.phi_dot)});
}

double max_norm3(const ReducedPoint& a) {
    return std::max({std::abs(a.a_dot), std::abs(a.phi), std::abs(a.phi_dot)});
}

}  // namespace

SymmetricSurfaces build_symmetric_surfaces(const cosmo::FRWModel& model, double cube_side,
                                           const SurfaceBuildOptions& opts) {
    model.validate();
    SymmetricSurfaces out;
    out.cube_side = cube_side;
    out.spacing = opts.spacing;
    out.axis_points = opts.axis_points;

    const double half = 0.5 * cube_side;
    const double exit_margin = cube_side / 8.0;

    struct Job {
        int axis;
        double coord;
    };
    std::vector<Job> jobs;
    for (int axis = 1; axis <= 2; ++axis) {
        for (std::size_t j = 0; j < opts.axis_points; ++j) {
            double c = -half + (static_cast<double>(j) + 0.5) * cube_side /
                                   static_cast<double>(opts.axis_points);
            if (std::abs(c) < opts.axis_cut * half) continue;
            jobs.push_back({axis, c});
        }
    }

    std::vector<std::vector<SurfacePolyline>> results(jobs.size());
    parallel_for_chunks(jobs.size(), [&](std::size_t ji) {
        const auto& job = jobs[ji];
        ReducedPoint axis_pt = (job.axis == 1) ? ReducedPoint{0.0, job.coord, 0.0}
                                               : ReducedPoint{0.0, 0.0, job.coord};
        cosmo::CosmoState ic;
        try {
            ic.a = cosmo::solve_constraint_for_a(axis_pt.a_dot, axis_pt.phi, axis_pt.phi_dot,
                                                 model)
                       .a;
        } catch (const NoPhysicalRoot&) {
            return;  // logged as a skipped point by the caller via polyline count
        }
        ic.a_dot = axis_pt.a_dot;
        ic.phi = axis_pt.phi;
        ic.phi_dot = axis_pt.phi_dot;

        SurfacePolyline fwd;
        fwd.axis = job.axis;
        fwd.axis_coordinate = job.coord;
        fwd.points.push_back(axis_pt);

        cosmo::CosmoStepper stepper(model, ic, opts.step);
        ReducedPoint last = axis_pt;
        double a_max = ic.a;
        const auto max_steps = static_cast<std::size_t>(opts.t_cap / opts.step);
        for (std::size_t s = 0; s < max_steps; ++s) {
            if (!stepper.advance()) break;
            cosmo::CosmoState st = stepper.state();
            a_max = std::max(a_max, st.a);
            if (st.a <= 0.0 || st.a < 1e-6 * a_max) break;
            // Collapse no longer resolvable by this fixed step: end the branch.
            if (st.a_dot < 0.0 && st.a < 200.0 * opts.step * (-st.a_dot)) break;
            ReducedPoint p{st.a_dot, st.phi, st.phi_dot};
            if (max_norm3(p, last) >= opts.spacing) {
                fwd.points.push_back(p);
                last = p;
            }
            if (max_norm3(p) > half + exit_margin) break;
        }

        // The backward branch is the exact parity image of the forward one.
        SurfacePolyline bwd;
        bwd.axis = job.axis;
        bwd.axis_coordinate = job.coord;
        bwd.points.reserve(fwd.points.size());
        for (const auto& p : fwd.points) bwd.points.push_back(mirror_point(p, job.axis));

        results[ji].push_back(std::move(fwd));
        results[ji].push_back(std::move(bwd));
    });

    for (auto& r : results)
        for (auto& pl : r) out.polylines.push_back(std::move(pl));
    return out;
}

SurfaceIndex::SurfaceIndex(const SymmetricSurfaces& surfaces, double radius)
    : radius_(radius) {
    if (radius <= 0.0) throw InvalidArgument("SurfaceIndex: radius must be positive");
    const double half = 0.5 * surfaces.cube_side;
    const double pad = surfaces.cube_side / 8.0 + radius;
    origin_ = -(half + pad);
    cell_ = radius;
    n_ = static_cast<int>(std::ceil(2.0 * (half + pad) / cell_));
    cells_.assign(static_cast<std::size_t>(n_) * n_ * n_, {});

    auto clamp_idx = [&](double v) {
        int i = static_cast<int>(std::floor((v - origin_) / cell_));
        return std::clamp(i, 0, n_ - 1);
    };

    for (const auto& pl : surfaces.polylines) {
        for (std::size_t i = 0; i + 1 < pl.points.size() || (pl.points.size() == 1 && i == 0);
             ++i) {
            Segment seg;
            seg.a = pl.points[i];
            if (i + 1 < pl.points.size()) {
                seg.d = ReducedPoint{pl.points[i + 1].a_dot - seg.a.a_dot,
                                     pl.points[i + 1].phi - seg.a.phi,
                                     pl.points[i + 1].phi_dot - seg.a.phi_dot};
            } else {
                seg.d = ReducedPoint{0.0, 0.0, 0.0};
            }
            auto id = static_cast<std::uint32_t>(segments_.size());
            segments_.push_back(seg);

            double bx0 = std::min(seg.a.a_dot, seg.a.a_dot + seg.d.a_dot) - radius;
            double bx1 = std::max(seg.a.a_dot, seg.a.a_dot + seg.d.a_dot) + radius;
            double by0 = std::min(seg.a.phi, seg.a.phi + seg.d.phi) - radius;
            double by1 = std::max(seg.a.phi, seg.a.phi + seg.d.phi) + radius;
            double bz0 = std::min(seg.a.phi_dot, seg.a.phi_dot + seg.d.phi_dot) - radius;
            double bz1 = std::max(seg.a.phi_dot, seg.a.phi_dot + seg.d.phi_dot) + radius;
            for (int ix = clamp_idx(bx0); ix <= clamp_idx(bx1); ++ix)
                for (int iy = clamp_idx(by0); iy <= clamp_idx(by1); ++iy)
                    for (int iz = clamp_idx(bz0); iz <= clamp_idx(bz1); ++iz)
                        cells_[(static_cast<std::size_t>(ix) * n_ + iy) * n_ + iz].push_back(
                            id);
        }
    }
}

std::size_t SurfaceIndex::cell_of(double x, double y, double z) const {
    auto idx = [&](double v) {
        int i = static_cast<int>(std::floor((v - origin_) / cell_));
        return std::clamp(i, 0, n_ - 1);
    };
    return (static_cast<std::size_t>(idx(x)) * n_ + idx(y)) * n_ + idx(z);
}

namespace {

// Exact minimum over s in [0,1] of max-norm |e - s d|; the minimum of a
// piecewise-linear convex function, attained at an endpoint, a coordinate
// zero, or a pairwise crossing.
double segment_distance(const ReducedPoint& p, const ReducedPoint& a, const ReducedPoint& d) {
    const double e[3] = {p.a_dot - a.a_dot, p.phi - a.phi, p.phi_dot - a.phi_dot};
    const double dd[3] = {d.a_dot, d.phi, d.phi_dot};

    double candidates[12];
    int nc = 0;
    candidates[nc++] = 0.0;
    candidates[nc++] = 1.0;
    for (int i = 0; i < 3; ++i)
        if (dd[i] != 0.0) candidates[nc++] = e[i] / dd[i];
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double den1 = dd[i] - dd[j];
            if (den1 != 0.0) candidates[nc++] = (e[i] - e[j]) / den1;
            double den2 = dd[i] + dd[j];
            if (den2 != 0.0) candidates[nc++] = (e[i] + e[j]) / den2;
        }

    double best = 1e300;
    for (int c = 0; c < nc; ++c) {
        double s = std::clamp(candidates[c], 0.0, 1.0);
        double v = 0.0;
        for (int i = 0; i < 3; ++i) v = std::max(v, std::abs(e[i] - s * dd[i]));
        best = std::min(best, v);
    }
    return best;
}

}  // namespace

double SurfaceIndex::distance(const ReducedPoint& p) const {
    const auto& bucket = cells_[cell_of(p.a_dot, p.phi, p.phi_dot)];
    double best = radius_;
    for (std::uint32_t id : bucket) {
        const auto& seg = segments_[id];
        best = std::min(best, segment_distance(p, seg.a, seg.d));
        if (best == 0.0) break;
    }
    return best;
}

MeasureScanResult scan_tube_measure(const MeasureScanConfig& config,
                                    const SymmetricSurfaces& surfaces) {
    config.validate();
    double eps_min = *std::min_element(config.epsilons.begin(), config.epsilons.end());
    double eps_max = *std::max_element(config.epsilons.begin(), config.epsilons.end());
    if (surfaces.spacing > eps_min / 4.0)
        throw MeshTooCoarse("scan_tube_measure: surface spacing exceeds eps_min/4");

    SurfaceIndex index(surfaces, 0.5 * eps_max + 1e-12);
    const double half = 0.5 * config.cube_side;
    const std::size_t n_eps = config.epsilons.size();
    const auto n_chunks = (config.n_samples + kChunk - 1) / kChunk;

    std::vector<std::vector<std::size_t>> counts(n_chunks,
                                                 std::vector<std::size_t>(n_eps, 0));
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        Rng rng(derive_seed(config.seed, c));
        std::size_t lo = c * kChunk;
        std::size_t hi = std::min(config.n_samples, lo + kChunk);
        auto& local = counts[c];
        for (std::size_t s = lo; s < hi; ++s) {
            ReducedPoint p{rng.uniform(-half, half), rng.uniform(-half, half),
                           rng.uniform(-half, half)};
            double dist = index.distance(p);
            for (std::size_t e = 0; e < n_eps; ++e)
                if (dist < 0.5 * config.epsilons[e]) ++local[e];
        }
    });

    MeasureScanResult result;
    for (std::size_t e = 0; e < n_eps; ++e) {
        std::size_t hits = 0;
        for (std::size_t c = 0; c < n_chunks; ++c) hits += counts[c][e];
        MeasureScanRow row;
        row.epsilon = config.epsilons[e];
        row.hits = hits;
        row.fraction = static_cast<double>(hits) / static_cast<double>(config.n_samples);
        row.stderr_ = binomial_stderr(row.fraction, config.n_samples);
        row.predicted = std::min(1.0, 2.0 * row.epsilon / config.cube_side);
        result.rows.push_back(row);
    }
    fit_loglog(result);
    return result;
}

MeasureScanResult tube_scan_with_refinement(const MeasureScanConfig& config,
                                            SurfaceBuildOptions opts, int max_refinements) {
    config.validate();
    MeasureScanResult prev;
    bool have_prev = false;
    for (int r = 0; r <= max_refinements; ++r) {
        auto surfaces = build_symmetric_surfaces(config.model, config.cube_side, opts);
        auto scan = scan_tube_measure(config, surfaces);
        if (have_prev) {
            double f_new = scan.rows.front().fraction;
            double f_old = prev.rows.front().fraction;
            if (f_old > 0.0 && std::abs(f_new - f_old) / f_old < 0.05) return scan;
        }
        prev = std::move(scan);
        have_prev = true;
        opts.axis_points *= 2;
    }
    return prev;
}

CensusResult dynamic_symmetry_census(const MeasureScanConfig& config,
                                     const CensusOptions& opts) {
    MeasureScanConfig cfg = config;
    if (cfg.epsilons.empty()) cfg.epsilons = {2.0 * opts.tol};  // tolerance-matched grain
    cfg.validate();
    const double half = 0.5 * config.cube_side;
    const double eps = 2.0 * opts.tol;
    const std::size_t n = config.n_samples;

    std::vector<std::uint8_t> empirical(n, 0), predicted(n, 0);
    parallel_for_chunks(n, [&](std::size_t i) {
        Rng rng(derive_seed(config.seed, i));
        ReducedPoint p{rng.uniform(-half, half), rng.uniform(-half, half),
                       rng.uniform(-half, half)};
        predicted[i] = axis_membership(p, eps) ? 1 : 0;
        cosmo::CosmoState ic;
        try {
            ic.a = cosmo::solve_constraint_for_a(p.a_dot, p.phi, p.phi_dot, config.model).a;
        } catch (const NoPhysicalRoot&) {
            return;
        }
        ic.a_dot = p.a_dot;
        ic.phi = p.phi;
        ic.phi_dot = p.phi_dot;
        cosmo::EvolveOptions eopts;
        eopts.adaptive = true;
        eopts.max_step = opts.t_span / 400.0;
        auto run = cosmo::evolve_two_sided(ic, config.model, opts.t_span, opts.t_span, eopts);
        if (cosmo::detect_cosmo_symmetry(run, opts.tol)) empirical[i] = 1;
    });

    CensusResult res;
    res.n = n;
    std::size_t emp = 0, pre = 0;
    for (std::size_t i = 0; i < n; ++i) {
        emp += empirical[i];
        pre += predicted[i];
    }
    res.empirical_fraction = static_cast<double>(emp) / static_cast<double>(n);
    res.predicted_fraction = static_cast<double>(pre) / static_cast<double>(n);
    double se_e = binomial_stderr(res.empirical_fraction, n);
    double se_p = binomial_stderr(res.predicted_fraction, n);
    res.combined_stderr = std::sqrt(se_e * se_e + se_p * se_p);
    res.agree_within_3se =
        std::abs(res.empirical_fraction - res.predicted_fraction) <= 3.0 * res.combined_stderr;
    return res;
}

}  // namespace tempus::corkscrew
