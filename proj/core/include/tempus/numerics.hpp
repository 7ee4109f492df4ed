#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tempus {

// Pairwise summation: O(log n) error growth and a fixed reduction tree,
// independent of the caller's chunking.
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double slope_ci95 = 0.0;  // half-width, t-based
    double r2 = 0.0;
    std::size_t n = 0;
};

// Ordinary least squares of y against x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Golden-section minimization of f on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_iter = 200);

// Bisection root of f on [a, b]; f(a) and f(b) must differ in sign.
double bisect_root(const std::function<double(double)>& f, double a, double b, double tol,
                   int max_iter = 200);

// ln C(n, k) via lgamma.
double log_binomial(unsigned n, unsigned k);

// Two-sample Kolmogorov–Smirnov test; returns the asymptotic p-value.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

inline double binomial_stderr(double fraction, std::size_t n) {
    if (n == 0) return 0.0;
    double f = fraction;
    return std::sqrt(f * (1.0 - f) / static_cast<double>(n));
}

// Run fn(chunk_index) for chunk_index in [0, n_chunks) on up to max_threads
// workers. Chunk decomposition is fixed, so results are independent of the
// worker count as long as fn(i) writes only to slot i.
void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn,
                         unsigned max_threads = 0);

// Global worker cap used when max_threads == 0 (set from --threads / TEMPUS_THREADS).
void set_max_threads(unsigned n);
unsigned max_threads();

}  // namespace tempus
