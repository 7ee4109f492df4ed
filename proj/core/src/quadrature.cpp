#include "tempus/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "tempus/errors.hpp"

namespace tempus {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(std::size_t n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

GaussLegendre::GaussLegendre(std::size_t n) {
    if (n == 0) throw InvalidArgument("GaussLegendre: n must be positive");
    nodes.resize(n);
    weights.resize(n);
    const double pi = std::acos(-1.0);
    for (std::size_t k = 1; k <= (n + 1) / 2; ++k) {
        // Tricomi initial guess, then Newton.
        double x = std::cos(pi * (4.0 * k - 1.0) / (4.0 * n + 2.0)) *
                   (1.0 - 1.0 / (8.0 * n * n) + 1.0 / (8.0 * n * n * n));
        double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre(n, x, p, dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k - 1] = -x;
        weights[k - 1] = w;
        nodes[n - k] = x;
        weights[n - k] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void GaussLegendre::mapped(double a, double b, std::vector<double>& x,
                           std::vector<double>& w) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    x.resize(nodes.size());
    w.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        x[i] = mid + half * nodes[i];
        w[i] = half * weights[i];
    }
}

CompositeQuadrature::CompositeQuadrature(double a, double b, double max_panel_width,
                                         std::size_t nodes_per_panel) {
    if (b <= a) throw InvalidArgument("CompositeQuadrature: empty interval");
    if (max_panel_width <= 0.0) throw InvalidArgument("CompositeQuadrature: bad panel width");
    const auto n_panels =
        static_cast<std::size_t>(std::ceil((b - a) / max_panel_width));
    const double h = (b - a) / static_cast<double>(n_panels);
    GaussLegendre rule(nodes_per_panel);
    x.reserve(n_panels * nodes_per_panel);
    w.reserve(n_panels * nodes_per_panel);
    std::vector<double> px, pw;
    for (std::size_t p = 0; p < n_panels; ++p) {
        double pa = a + h * static_cast<double>(p);
        double pb = (p + 1 == n_panels) ? b : pa + h;
        rule.mapped(pa, pb, px, pw);
        x.insert(x.end(), px.begin(), px.end());
        w.insert(w.end(), pw.begin(), pw.end());
    }
}

double oscillatory_panel_width(double feature_scale, double t_max) {
    double by_feature = feature_scale / 4.0;
    double by_phase = (t_max > 0.0) ? 2.5 / t_max : by_feature;
    return std::max(1e-6, std::min(by_feature, by_phase));
}

}  // namespace tempus
