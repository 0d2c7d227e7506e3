#include "autoconv/families.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace autoconv {

namespace {

// Gamma((d+1)/2) pi^{-(d+1)/2} for d = 1, 2, 3.
double poisson_normalization(int dim) {
    using std::numbers::pi;
    switch (dim) {
        case 1:
            return 1.0 / pi;
        case 2:
            return (std::sqrt(pi) / 2.0) / std::pow(pi, 1.5);
        case 3:
            return 1.0 / (pi * pi);
        default:
            throw std::invalid_argument("poisson: dimension must be 1, 2 or 3");
    }
}

double poisson_value(double a, double t, int dim, double r2, double norm) {
    return a * norm * t / std::pow(t * t + r2, 0.5 * (dim + 1));
}

}  // namespace

Evaluator poisson(const PoissonParams& params) {
    if (!(params.a > 0.0) || !(params.t > 0.0)) {
        throw std::invalid_argument("poisson: a and t must be positive");
    }
    const double norm = poisson_normalization(params.dim);
    return [params, norm](const Point& x) {
        return poisson_value(params.a, params.t, params.dim, x.squaredNorm(), norm);
    };
}

Evaluator poisson_inequality_margin(double a, double t, int dim) {
    if (!(a > 0.0) || !(t > 0.0)) {
        throw std::invalid_argument("poisson_inequality_margin: a and t must be positive");
    }
    const double norm = poisson_normalization(dim);
    return [a, t, dim, norm](const Point& x) {
        const double r2 = x.squaredNorm();
        return poisson_value(a, t, dim, r2, norm) - poisson_value(a * a, 2.0 * t, dim, r2, norm);
    };
}

Evaluator sinc_counterexample(const SincParams& params) {
    if (!(params.a > 0.0)) {
        throw std::invalid_argument("sinc_counterexample: a must be positive");
    }
    const double a = params.a;
    return [a](const Point& x) {
        using std::numbers::pi;
        const double s = x[0];
        if (s == 0.0) {
            return 2.0 * a;
        }
        return std::sin(2.0 * pi * a * s) / (pi * s);
    };
}

Evaluator gaussian_density(double sigma, int dim) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_density: sigma must be positive");
    }
    const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * dim);
    return [sigma, norm](const Point& x) {
        return norm * std::exp(-0.5 * x.squaredNorm() / (sigma * sigma));
    };
}

Evaluator box(double mass, double half_width, int dim) {
    if (!(half_width > 0.0)) {
        throw std::invalid_argument("box: half width must be positive");
    }
    const double height = mass / std::pow(2.0 * half_width, dim);
    return [height, half_width](const Point& x) {
        return x.cwiseAbs().maxCoeff() <= half_width ? height : 0.0;
    };
}

GridFunction reverse_example(const GridSpec& spec, double a, double delta) {
    if (spec.dim() != 1) {
        throw std::invalid_argument("reverse_example: one-dimensional grids only");
    }
    const Evaluator gauss = gaussian_density(1.0, 1);
    return sample(spec, [&](const Point& x) {
        return std::abs(x[0]) <= delta ? -1.0 : a * gauss(x);
    });
}

Evaluator heavy_tail_density() {
    return [](const Point& x) { return std::pow(1.0 + std::abs(x[0]), -3.0); };
}

double heavy_tail_cdf(double x) {
    // int_x^inf (1+s)^{-3} ds = (1+x)^{-2}/2 for x >= 0.
    const double upper = 0.5 / ((1.0 + std::abs(x)) * (1.0 + std::abs(x)));
    return x >= 0.0 ? 1.0 - upper : upper;
}

double heavy_tail_quantile(double v) {
    if (!(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument("heavy_tail_quantile: v must lie in (0, 1)");
    }
    const double d = v - 0.5;
    const double magnitude = 1.0 / std::sqrt(1.0 - 2.0 * std::abs(d)) - 1.0;
    return d < 0.0 ? -magnitude : magnitude;
}

Evaluator unit_variance_uniform() {
    const double half = std::sqrt(3.0);
    return [half](const Point& x) { return std::abs(x[0]) <= half ? 0.5 / half : 0.0; };
}

}  // namespace autoconv
