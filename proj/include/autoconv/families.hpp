#pragma once

#include "autoconv/grid.hpp"

namespace autoconv {

/// Parameters of the Poisson kernel f_{a,t}, whose transform is a e^{-2 pi t |k|}.
struct PoissonParams {
    double a = 0.5;
    double t = 1.0;
    int dim = 1;
};

/// Band-limited kernel sin(2 pi a x)/(pi x), transform 1_{[-a, a]}.
struct SincParams {
    double a = 1.0;
};

/**
 * f_{a,t}(x) = a Gamma((d+1)/2) pi^{-(d+1)/2} t / (t^2 + |x|^2)^{(d+1)/2}.
 * Total mass a; f_{a,t} * f_{a,t} = f_{a^2, 2t}.
 */
Evaluator poisson(const PoissonParams& params);

/// f_{a,t} - f_{a^2,2t}; nonnegative everywhere iff a <= 1/2.
Evaluator poisson_inequality_margin(double a, double t, int dim);

/// sin(2 pi a x)/(pi x) with the value 2a at x = 0. One-dimensional.
Evaluator sinc_counterexample(const SincParams& params);

/// Centered isotropic Gaussian probability density with standard deviation sigma.
Evaluator gaussian_density(double sigma, int dim);

/// mass * uniform density on [-half_width, half_width]^d.
Evaluator box(double mass, double half_width, int dim);

/**
 * a times the standard Gaussian density on a 1-d grid, overwritten by -1 on
 * |x| <= delta. For a large enough and delta small this satisfies the
 * reversed inequality f < f*f everywhere; that is checked downstream.
 */
GridFunction reverse_example(const GridSpec& spec, double a, double delta);

/**
 * w(x) = (1 + |x|)^{-3} on R: symmetric probability density with mean zero
 * and infinite variance.
 */
Evaluator heavy_tail_density();

/// Exact CDF of the heavy-tail density.
double heavy_tail_cdf(double x);

/// Inverse-CDF draw: x = sign(v - 1/2) ((1 - 2|v - 1/2|)^{-1/2} - 1).
double heavy_tail_quantile(double v);

/// Uniform density on [-sqrt(3), sqrt(3)], unit variance.
Evaluator unit_variance_uniform();

}  // namespace autoconv
