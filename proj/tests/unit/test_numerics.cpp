#include <doctest.h>

#include <cmath>
#include <vector>

#include "tempus/numerics.hpp"
#include "tempus/quadrature.hpp"
#include "tempus/rng.hpp"

using namespace tempus;

TEST_SUITE("numerics") {

TEST_CASE("pairwise sum matches plain sum") {
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i * 0.37));
    double plain = 0.0;
    for (double x : xs) plain += x;
    CHECK(pairwise_sum(xs) == doctest::Approx(plain).epsilon(1e-13));
}

TEST_CASE("linear fit recovers exact line") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(i);
        y.push_back(3.5 * i - 1.25);
    }
    auto fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(-1.25).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("golden section finds the parabola minimum") {
    double x = golden_section_min([](double v) { return (v - 2.0) * (v - 2.0); }, 0.0, 5.0,
                                  1e-10);
    CHECK(x == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("bisection root") {
    double r = bisect_root([](double v) { return v * v - 2.0; }, 0.0, 2.0, 1e-12);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("log binomial against exact values") {
    CHECK(log_binomial(5, 2) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    CHECK(log_binomial(20, 10) == doctest::Approx(std::log(184756.0)).epsilon(1e-12));
    CHECK(log_binomial(7, 0) == doctest::Approx(0.0));
}

TEST_CASE("two-sample KS distinguishes shifted samples") {
    Rng rng(7);
    std::vector<double> a, b, c;
    for (int i = 0; i < 4000; ++i) {
        a.push_back(rng.uniform01());
        b.push_back(rng.uniform01());
        c.push_back(rng.uniform01() + 0.2);
    }
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    GaussLegendre rule(8);
    std::vector<double> x, w;
    rule.mapped(0.0, 2.0, x, w);
    // int_0^2 x^7 dx = 32
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * std::pow(x[i], 7);
    CHECK(acc == doctest::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("composite quadrature handles oscillatory integrands") {
    // int_0^10 cos(20 x) dx = sin(200) / 20
    CompositeQuadrature q(0.0, 10.0, oscillatory_panel_width(10.0, 20.0));
    double acc = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) acc += q.w[i] * std::cos(20.0 * q.x[i]);
    CHECK(acc == doctest::Approx(std::sin(200.0) / 20.0).epsilon(1e-10));
}

TEST_CASE("seed derivation separates streams") {
    CHECK(derive_seed(42, "alpha") != derive_seed(42, "beta"));
    CHECK(derive_seed(42, "alpha") == derive_seed(42, "alpha"));
    Rng r1(derive_seed(42, "alpha"));
    Rng r2(derive_seed(42, "alpha"));
    for (int i = 0; i < 16; ++i) CHECK(r1.next_u64() == r2.next_u64());
}

TEST_CASE("parallel chunks are independent of worker count") {
    std::vector<double> a(64, 0.0), b(64, 0.0);
    parallel_for_chunks(64, [&](std::size_t i) { a[i] = std::sqrt(i + 1.0); }, 1);
    parallel_for_chunks(64, [&](std::size_t i) { b[i] = std::sqrt(i + 1.0); }, 8);
    CHECK(a == b);
}

}  // TEST_SUITE
