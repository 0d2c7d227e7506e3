#pragma once

#include "autoconv/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace autoconv {

enum class VarianceClass { finite, infinite };

/**
 * Ball masses p_{n,R} = P(|n^{-1/2} (X_1 + ... + X_n)| <= R) for each n,
 * computed on a grid and by Monte Carlo.
 */
struct CltResult {
    double R = 1.0;
    VarianceClass variance_class = VarianceClass::finite;
    std::vector<int> n_list;
    std::vector<double> p_values;
    std::vector<double> phi_values;  ///< integral of min(1, |x|) against the rescaled density
    std::vector<double> masses;      ///< total mass of each rescaled density
    std::vector<double> mc_values;   ///< empty when mc_samples = 0
    std::vector<double> mc_stderr;
    double gaussian_target = 0.0;    ///< ball mass of the variance-1 Gaussian; finite class only
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

/**
 * Density of n^{-1/2} (X_1 + ... + X_n) for X_j ~ w, sampled on out_spec.
 *
 * c(k) = h^d sum_j w_j e^{-i 2 pi k.x_j} is evaluated by direct quadrature
 * at k/sqrt(n) for every frequency of out_spec, normalized by c(0), raised
 * to the n-th power in log-magnitude form and inverted. Negative values
 * down to -1e-8 are clamped to zero. A mass more than 2% away from one is
 * recorded in `warnings` when provided.
 */
GridFunction rescaled_density(const GridFunction& w, int n, const GridSpec& out_spec,
                              std::vector<std::string>* warnings = nullptr);

/// Mass of the ball |x| <= R. In one dimension each node's cell is weighted
/// by its overlap with [-R, R]; for d > 1 nodes with |x_j| <= R count fully.
double ball_mass(const GridFunction& density, double R);

/// h^d sum min(1, |x_j|) density_j.
double phi_functional(const GridFunction& density);

struct CltOptions {
    std::uint64_t seed = 20201105;
    /// Worker threads for the Monte Carlo path; results do not depend on it.
    unsigned threads = 1;
    /// Window of the summand density; the heavy tail needs a wide one.
    double w_extent = 0.0;  ///< 0: 4 for finite, 1024 for infinite variance
    std::size_t w_points = 0;  ///< 0: 8192 for finite, 32768 for infinite variance
    double out_extent = 32.0;
    std::size_t out_points = 2048;
};

/**
 * finite: uniform on [-sqrt 3, sqrt 3] (variance 1).
 * infinite: (1 + |x|)^{-3}, mean zero with infinite variance.
 * One result per radius. mc_samples = 0 skips Monte Carlo.
 */
std::vector<CltResult> run_experiment(VarianceClass kind, const std::vector<double>& radii,
                                      const std::vector<int>& n_list, std::size_t mc_samples,
                                      const CltOptions& options = {});

CltResult run_experiment(VarianceClass kind, double R, const std::vector<int>& n_list,
                         std::size_t mc_samples, const CltOptions& options = {});

VarianceClass parse_variance_class(const std::string& name);
std::string to_string(VarianceClass v);

}  // namespace autoconv
