#include "doctest.h"

#include "autoconv/analyze.hpp"
#include "autoconv/coeff.hpp"
#include "autoconv/construct.hpp"
#include "autoconv/families.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace autoconv;

namespace {

double mass_law(double b) { return 0.5 - 0.5 * std::sqrt(1.0 - 4.0 * b); }

GridFunction gaussian_residual(const GridSpec& spec, double b, double sigma = 1.0) {
    const Evaluator g = gaussian_density(sigma, spec.dim());
    const GridFunction u = sample(spec, [&](const Point& x) { return g(x); });
    return scaled(u, b / integrate(u));
}

}  // namespace

TEST_CASE("default epsilon by regime") {
    CHECK(default_epsilon(0.5) == 1e-4);
    CHECK(default_epsilon(0.9) == 1e-4);
    CHECK(default_epsilon(0.95) == 1e-3);
    CHECK(default_epsilon(1.0) == 1e-2);
}

TEST_CASE("zero residual") {
    const GridSpec spec(1, 8.0, 256);
    const SeriesBuild s = build_series(GridFunction(spec), 1e-6);
    CHECK(s.n_terms == 1);
    CHECK(s.f.values().cwiseAbs().maxCoeff() == 0.0);
    const GridFunction sp = build_spectral(GridFunction(spec));
    CHECK(sp.values().cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(crosscheck(s, sp) <= 1e-15);
}

TEST_CASE("subcritical gaussian residual, b = 3/16") {
    const GridSpec spec(1, 32.0, 2048);
    const GridFunction u = gaussian_residual(spec, 3.0 / 16.0);
    const SeriesBuild s = build_series(u, 1e-6);
    CHECK(s.q == doctest::Approx(0.75));
    CHECK(s.tail_l1 <= 1e-6);
    CHECK(integrate(s.f) == doctest::Approx(0.25).epsilon(4e-3));
    CHECK(s.f.values().minCoeff() >= 0.0);

    const GridFunction sp = build_spectral(u);
    CHECK(integrate(sp) == doctest::Approx(0.25).epsilon(4e-6));
    CHECK(crosscheck(s, sp) <= 1e-4);
}

TEST_CASE("minimal N follows the coefficient tail") {
    const GridSpec spec(1, 16.0, 512);
    const GridFunction u = gaussian_residual(spec, 0.2);
    const SeriesBuild s = build_series(u, 1e-8);
    const CoeffTable t = build_coeffs(s.n_terms + 1);
    CHECK(0.5 * t.tail_bound(s.n_terms, s.q) <= 1e-8);
    CHECK(0.5 * t.tail_bound(s.n_terms - 1, s.q) > 1e-8);

    SeriesOptions fixed;
    fixed.fixed_terms = 3;
    const SeriesBuild three = build_series(u, fixed);
    CHECK(three.n_terms == 3);
    // 1/2 (c_1 4 u + c_2 16 u*u + c_3 64 u*u*u) = u + u*u + 2 u*u*u
    const GridFunction uu = convolve(u, u);
    const GridFunction uuu = convolve(uu, u);
    const GridFunction expected = linear_combination(1.0, linear_combination(1.0, u, 1.0, uu), 2.0, uuu);
    CHECK((three.f.values() - expected.values()).cwiseAbs().maxCoeff() <=
          1e-12 * expected.values().maxCoeff());
}

TEST_CASE("critical gaussian residual") {
    const GridSpec spec(1, 64.0, 1024);
    const GridFunction u = gaussian_residual(spec, 0.25);
    const double eps = 0.01;
    const SeriesBuild s = build_series(u, eps);
    CHECK(s.q == doctest::Approx(1.0));
    // 1 - S_N ~ 1/sqrt(pi N) <= 2 eps.
    const double predicted = 1.0 / (std::numbers::pi * 4.0 * eps * eps);
    CHECK(static_cast<double>(s.n_terms) == doctest::Approx(predicted).epsilon(0.05));
    const double a = integrate(s.f);
    CHECK(a >= 0.48);
    CHECK(a <= 0.5);
    CHECK(s.f.values().minCoeff() >= 0.0);

    const GridFunction sp = build_spectral(u);
    CHECK(crosscheck(s, sp) <= 0.02);
}

TEST_CASE("spectral path recovers the Poisson kernel from its residual") {
    const GridSpec spec(1, 200.0, 16384);
    const GridFunction u = sample(spec, poisson_inequality_margin(0.5, 1.0, 1));
    const GridFunction f = build_spectral(u);
    const GridFunction exact = sample(spec, poisson({0.5, 1.0, 1}));
    double worst = 0.0;
    for (std::size_t j = 0; j < spec.size(); ++j) {
        if (std::abs(spec.coordinate(j)) <= 20.0) {
            worst = std::max(worst, std::abs(f[j] - exact[j]));
        }
    }
    CHECK(worst <= 2e-3 * exact.at_origin());
}

TEST_CASE("mass law on random residuals, both paths") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> bdist(0.01, 0.24);
    const GridSpec spec(1, 32.0, 1024);
    for (int trial = 0; trial < 6; ++trial) {
        const double b = bdist(gen);
        const GridFunction u = gaussian_residual(spec, b, 0.5 + trial * 0.2);
        const SeriesBuild s = build_series(u, 1e-6);
        CHECK(integrate(s.f) == doctest::Approx(mass_law(b)).epsilon(1e-3));
        CHECK(integrate(build_spectral(u)) == doctest::Approx(mass_law(b)).epsilon(1e-3));
        CHECK(s.f.values().minCoeff() >= 0.0);
        // Inequality closure.
        const SolutionReport r = verify(s.f);
        CHECK(r.verdict == Verdict::solution);
        CHECK(l1_norm(linear_combination(1.0, r.residual, -1.0, u)) <= s.tail_l1 + 1e-3);
    }
}

TEST_CASE("monotone in u") {
    const GridSpec spec(1, 16.0, 512);
    const GridFunction u1 = gaussian_residual(spec, 0.1);
    const GridFunction bump = compact_bump(spec, 0.05, {CompactBump::Shape::cosine});
    const GridFunction u2 = linear_combination(1.0, u1, 1.0, bump);
    SeriesOptions o;
    o.fixed_terms = 40;
    const SeriesBuild s1 = build_series(u1, o);
    const SeriesBuild s2 = build_series(u2, o);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        REQUIRE(s2.f[j] >= s1.f[j] * (1.0 - 1e-12) - 1e-300);
    }
}

TEST_CASE("support grows by the Minkowski sum") {
    const GridSpec spec(1, 16.0, 1024);
    const GridFunction u = compact_bump(spec, 0.2, {CompactBump::Shape::box});
    for (const std::size_t n : {1u, 3u, 6u}) {
        SeriesOptions o;
        o.fixed_terms = n;
        const SeriesBuild s = build_series(u, o);
        double reach = 0.0;
        for (std::size_t j = 0; j < spec.size(); ++j) {
            // FFT roundoff leaves values near 1e-18 everywhere.
            if (s.f[j] > 1e-10 * s.f.values().maxCoeff()) {
                reach = std::max(reach, std::abs(spec.coordinate(j)));
            }
        }
        CHECK(reach == doctest::Approx(static_cast<double>(n)).epsilon(0.02));
    }
}

TEST_CASE("negative input handling") {
    const GridSpec spec(1, 8.0, 64);
    Eigen::VectorXd v = gaussian_residual(spec, 0.1).values();
    v[0] = -1e-13;
    const SeriesBuild s = build_series(GridFunction(spec, v), 1e-6);
    CHECK_FALSE(s.warnings.empty());
    v[0] = -1e-6;
    CHECK_THROWS_AS(build_series(GridFunction(spec, v), 1e-6), std::invalid_argument);
}

TEST_CASE("mass above 1/4 is refused") {
    const GridSpec spec(1, 16.0, 512);
    const GridFunction u = gaussian_residual(spec, 0.26);
    CHECK_THROWS_AS(build_series(u, 1e-3), std::domain_error);
    CHECK_THROWS_AS(build_spectral(u), std::domain_error);
}

TEST_CASE("term cap") {
    const GridSpec spec(1, 16.0, 256);
    SeriesOptions o;
    o.epsilon = 1e-4;
    o.max_terms = 1000;
    CHECK_THROWS_AS(build_series(gaussian_residual(spec, 0.25), o), std::runtime_error);
}

TEST_CASE("exponential example") {
    const GridSpec spec(1, 8.0, 1024);
    const SeriesBuild s = build_exponential_example(spec, 0.125, {CompactBump::Shape::box});
    CHECK(integrate(s.u) == doctest::Approx(0.125));
    CHECK(integrate(s.f) == doctest::Approx(mass_law(0.125)).epsilon(1e-4));
    CHECK(integrate(s.f) == doctest::Approx(0.1464466).epsilon(1e-4));
    CHECK_THROWS(build_exponential_example(spec, 0.25, {}));
    CHECK_THROWS(build_exponential_example(spec, 0.0, {}));

    // r -> 0: f = u + O(r^2).
    const SeriesBuild small = build_exponential_example(spec, 1e-4, {CompactBump::Shape::cosine});
    CHECK(l1_norm(linear_combination(1.0, small.f, -1.0, small.u)) <= 2e-8);

    const SeriesBuild big = build_exponential_example(spec, 0.24, {CompactBump::Shape::cosine});
    CHECK(exp_tail_fit(big.f, 1.5).rate < 0.0);
}

TEST_CASE("compact bumps in two dimensions") {
    const GridSpec spec(2, 4.0, 64);
    const GridFunction u = compact_bump(spec, 0.1, {CompactBump::Shape::cosine});
    CHECK(integrate(u) == doctest::Approx(0.1));
    const SeriesBuild s = build_series(u, 1e-8);
    CHECK(integrate(s.f) == doctest::Approx(mass_law(0.1)).epsilon(1e-6));
    CHECK(crosscheck(s, build_spectral(u)) <= 1e-6);
}

TEST_CASE("pointwise tail bound") {
    const GridSpec spec(1, 16.0, 512);
    const SeriesBuild s = build_series(gaussian_residual(spec, 0.2), 1e-3);
    CHECK(pointwise_tail_bound(s) == doctest::Approx(s.tail_l1 * s.u.values().maxCoeff() / 0.2).epsilon(1e-3));
}
