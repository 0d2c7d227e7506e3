#include "doctest.h"

#include "autoconv/families.hpp"
#include "autoconv/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace autoconv;

namespace {

constexpr double kPi = std::numbers::pi;

double gauss(double x, double sigma) {
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
}

double sup_abs_diff(const GridFunction& a, const GridFunction& b) {
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

// Random smooth-ish test function: a few Gaussian bumps.
GridFunction random_bumps(const GridSpec& spec, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> centre(-spec.extent() / 8, spec.extent() / 8);
    std::uniform_real_distribution<double> width(0.3, 1.5);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    double c[3], s[3], m[3];
    for (int i = 0; i < 3; ++i) {
        c[i] = centre(gen);
        s[i] = width(gen);
        m[i] = weight(gen);
    }
    return sample(spec, [&](const Point& x) {
        double v = 0.0;
        for (int i = 0; i < 3; ++i) {
            double r2 = 0.0;
            for (int a = 0; a < x.size(); ++a) {
                r2 += (x[a] - c[i]) * (x[a] - c[i]);
            }
            v += m[i] * std::exp(-0.5 * r2 / (s[i] * s[i]));
        }
        return v;
    });
}

}  // namespace

TEST_CASE("grid spec geometry") {
    const GridSpec s(1, 8.0, 64);
    CHECK(s.spacing() * 64 == doctest::Approx(16.0));
    CHECK(s.coordinate(0) == -8.0);
    CHECK(s.coordinate(32) == 0.0);
    CHECK(s.frequency(32) == 0.0);
    CHECK(s.frequency(33) == doctest::Approx(1.0 / 16.0));
    const GridSpec s3(3, 2.0, 8);
    CHECK(s3.size() == 512);
    CHECK(s3.node(s3.origin_index()).norm() == 0.0);
    CHECK(s3.cell_volume() == doctest::Approx(0.125));
}

TEST_CASE("grid spec rejects bad parameters") {
    CHECK_THROWS_AS(GridSpec(0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(1, 0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(1, -1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(1, 1.0, 12), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(1, 1.0, 4), std::invalid_argument);
}

TEST_CASE("grid function checks size and finiteness") {
    const GridSpec s(1, 1.0, 8);
    CHECK_THROWS_AS(GridFunction(s, Eigen::VectorXd::Zero(7)), std::invalid_argument);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
    v[3] = std::nan("");
    CHECK_THROWS_AS(GridFunction(s, v), std::domain_error);
    CHECK_THROWS_AS(sample(s, [](const Point&) { return INFINITY; }), std::domain_error);
}

TEST_CASE("sample") {
    const GridSpec s(1, 64.0, 4096);
    const GridFunction zero = sample(s, [](const Point&) { return 0.0; });
    CHECK(zero.values().cwiseAbs().maxCoeff() == 0.0);
    const GridFunction p = sample(s, poisson({0.5, 1.0, 1}));
    CHECK(p.at_origin() == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    for (const double L : {8.0, 16.0}) {
        const double m = integrate(sample(GridSpec(1, L, 1024), gaussian_density(1.0, 1)));
        CHECK(m >= 1.0 - 1e-6);
        CHECK(m <= 1.0 + 1e-12);
    }
}

TEST_CASE("integrate") {
    const GridSpec s(1, 100.0, 16384);
    const double m = integrate(sample(s, poisson({0.5, 1.0, 1})));
    const double exact = (1.0 / kPi) * std::atan(100.0);  // mass of f_{1/2,1} on [-100, 100]
    CHECK(m == doctest::Approx(exact).epsilon(1e-4));
    CHECK(m == doctest::Approx(0.5).epsilon(0.01));
    const GridSpec t(1, 4.0, 1024);
    const GridFunction box8 = sample(t, box(0.25, 1.0, 1));
    CHECK(std::abs(integrate(box8) - 0.25) <= t.spacing());
}

TEST_CASE("moment") {
    const GridSpec s(1, 4.0, 1024);
    const GridFunction g = sample(s, box(1.0, 1.0, 1));
    CHECK(moment(g, 0.0) == doctest::Approx(integrate(g)));
    CHECK(std::abs(moment(g, 1.0) - 0.5) <= s.spacing());
    CHECK(moment_in_window(g, 1.0, 0.5) == doctest::Approx(0.125).epsilon(0.02));
    CHECK_THROWS_AS(moment(g, -1.0), std::invalid_argument);

    // M_1(2l) - M_1(l) of f_{1/2,1} equals (1/2pi) ln((1 + 4 l^2)/(1 + l^2)) -> ln 2 / pi.
    const GridSpec big(1, 512.0, 65536);
    const GridFunction f = sample(big, poisson({0.5, 1.0, 1}));
    for (const double l : {64.0, 128.0, 256.0}) {
        const double inc = moment_in_window(f, 1.0, 2 * l) - moment_in_window(f, 1.0, l);
        const double exact = std::log((1 + 4 * l * l) / (1 + l * l)) / (2.0 * kPi);
        CHECK(inc == doctest::Approx(exact).epsilon(1e-3));
    }
}

TEST_CASE("moment on a 2-d grid uses the Euclidean norm") {
    const GridSpec s(2, 2.0, 8);
    GridFunction g(s);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(64);
    // node (1, 1): indices (6, 6)
    v[6 * 8 + 6] = 1.0;
    g = GridFunction(s, v);
    CHECK(moment(g, 2.0) == doctest::Approx(2.0 * s.cell_volume()));
}

TEST_CASE("gaussian semigroup under convolution") {
    const GridSpec s(1, 16.0, 4096);
    const GridFunction g = sample(s, gaussian_density(1.0, 1));
    const GridFunction c = convolve(g, g);
    const GridFunction expected = sample(s, gaussian_density(std::sqrt(2.0), 1));
    CHECK(sup_abs_diff(c, expected) <= 1e-6);
}

TEST_CASE("poisson semigroup under convolution") {
    const GridSpec s(1, 100.0, 16384);
    const GridFunction f = sample(s, poisson({0.5, 1.0, 1}));
    const GridFunction c = convolve(f, f);
    const GridFunction expected = sample(s, poisson({0.25, 2.0, 1}));
    double worst = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (std::abs(s.coordinate(j)) <= 50.0) {
            worst = std::max(worst, std::abs(c[j] - expected[j]) / expected[j]);
        }
    }
    CHECK(worst <= 0.02);
}

TEST_CASE("unit column at the origin is the identity") {
    const GridSpec s(1, 16.0, 1024);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(1024);
    v[512] = 1.0 / s.spacing();
    const GridFunction delta(s, v);
    const GridFunction g = sample(s, gaussian_density(1.0, 1));
    CHECK(sup_abs_diff(convolve(delta, g), g) <= 1e-6);
}

TEST_CASE("convolution is linear, not circular") {
    const GridSpec s(1, 4.0, 64);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(64);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(64);
    a[60] = 1.0;  // x = 3.5
    b[60] = 1.0;
    const GridFunction c = convolve(GridFunction(s, a), GridFunction(s, b));
    // x = 7 is outside the window; a periodic convolution would wrap it to x = -1.
    CHECK(c.values().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("convolution properties on random inputs") {
    std::mt19937_64 gen(7);
    for (const int dim : {1, 2, 3}) {
        const GridSpec s(dim, 16.0, dim == 1 ? 512 : (dim == 2 ? 128 : 32));
        for (int trial = 0; trial < 3; ++trial) {
            const GridFunction g1 = random_bumps(s, gen);
            const GridFunction g2 = random_bumps(s, gen);
            const GridFunction c12 = convolve(g1, g2);
            const GridFunction c21 = convolve(g2, g1);
            CHECK(sup_abs_diff(c12, c21) <= 1e-12 * c12.values().cwiseAbs().maxCoeff());
            CHECK(integrate(c12) == doctest::Approx(integrate(g1) * integrate(g2)).epsilon(1e-6));

            const Spectrum sp = dft(g1);
            CHECK(sp.conjugate_symmetry_defect() <= 1e-10);
            const double lhs = s.cell_volume() * g1.values().squaredNorm();
            const double rhs = sp.values().squaredNorm() / std::pow(2.0 * s.extent(), dim);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
            CHECK(sup_abs_diff(idft(sp), g1) <= 1e-12 * g1.values().cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("ConvolutionKernel matches convolve") {
    std::mt19937_64 gen(11);
    const GridSpec s(2, 10.0, 64);
    const GridFunction k = random_bumps(s, gen);
    const GridFunction g = random_bumps(s, gen);
    const ConvolutionKernel kernel(k);
    CHECK(sup_abs_diff(kernel.apply(g), convolve(k, g)) <= 1e-12 * convolve(k, g).values().maxCoeff());
}

TEST_CASE("first moments add under convolution") {
    const GridSpec s(1, 32.0, 2048);
    const GridFunction w = sample(s, [](const Point& x) { return gauss(x[0] - 1.5, 0.7); });
    const GridFunction ww = convolve(w, w);
    auto mean = [&](const GridFunction& g) {
        double m = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            m += s.coordinate(j) * g[j];
        }
        return m * s.spacing() / integrate(g);
    };
    CHECK(mean(ww) == doctest::Approx(2.0 * mean(w)).epsilon(1e-9));
}

TEST_CASE("dft matches closed-form transforms") {
    const GridSpec s(1, 16.0, 4096);
    const Spectrum g = dft(sample(s, gaussian_density(1.0, 1)));
    for (std::size_t i = 0; i < s.points_per_axis(); ++i) {
        const double k = s.frequency(i);
        if (std::abs(k) <= 2.0) {
            REQUIRE(std::abs(g[i] - std::exp(-2.0 * kPi * kPi * k * k)) <= 1e-8);
        }
    }
    CHECK(dft(GridFunction(s)).values().cwiseAbs().maxCoeff() == 0.0);

    const GridSpec big(1, 200.0, 32768);
    const Spectrum p = dft(sample(big, poisson({0.5, 1.0, 1})));
    for (std::size_t i = 0; i < big.points_per_axis(); ++i) {
        const double k = big.frequency(i);
        if (std::abs(k) >= 0.05 && std::abs(k) <= 1.0) {
            REQUIRE(std::abs(p[i] - 0.5 * std::exp(-2.0 * kPi * std::abs(k))) <= 1e-3);
        }
    }
}

TEST_CASE("idft requires conjugate symmetry") {
    const GridSpec s(1, 4.0, 16);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
    v[9] = std::complex<double>(0.0, 1.0);
    CHECK_THROWS(idft(Spectrum(s, v)));
    CHECK(idft_complex(Spectrum(s, v)).size() == 16);
}

TEST_CASE("crop keeps the central window") {
    const GridSpec s(2, 8.0, 64);
    const GridFunction g = sample(s, [](const Point& x) { return x[0] + 10.0 * x[1]; });
    const GridFunction c = crop(g, 4);
    CHECK(c.spec() == GridSpec(2, 2.0, 16));
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        const Point x = c.spec().node(flat);
        REQUIRE(c[flat] == doctest::Approx(x[0] + 10.0 * x[1]));
    }
    CHECK_THROWS_AS(crop(g, 3), std::invalid_argument);
    CHECK_THROWS_AS(crop(g, 16), std::invalid_argument);
}

TEST_CASE("mismatched grids are rejected") {
    const GridFunction a(GridSpec(1, 4.0, 16));
    const GridFunction b(GridSpec(1, 4.0, 32));
    CHECK_THROWS_AS(convolve(a, b), std::invalid_argument);
    CHECK_THROWS_AS(linear_combination(1.0, a, 1.0, b), std::invalid_argument);
}
