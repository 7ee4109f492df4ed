#pragma once

#include <cstddef>
#include <vector>

namespace tempus {

// Gauss–Legendre rule on [-1, 1]; nodes and weights computed once by Newton
// iteration on the Legendre recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(std::size_t n);

    // Rule mapped to [a, b].
    void mapped(double a, double b, std::vector<double>& x, std::vector<double>& w) const;
};

// Composite panel rule over [a, b]: per-panel Gauss–Legendre nodes, with panel
// widths capped so that both a feature scale and the fastest oscillation
// exp(i t x) for |t| <= t_max stay resolved.
struct CompositeQuadrature {
    std::vector<double> x;
    std::vector<double> w;

    CompositeQuadrature(double a, double b, double max_panel_width,
                        std::size_t nodes_per_panel = 10);
};

// Panel width heuristic: min(feature_scale / 4, 2.5 / t_max), floored to keep
// the plan finite.
double oscillatory_panel_width(double feature_scale, double t_max);

}  // namespace tempus
