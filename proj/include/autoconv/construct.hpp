#pragma once

#include "autoconv/grid.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace autoconv {

/// L1 truncation target used when the caller does not pick one.
/// 1e-4 for q <= 0.9, 1e-3 up to q = 0.99, 1e-2 beyond (tail ~ 1/sqrt(pi N)).
double default_epsilon(double q);

struct SeriesOptions {
    /// Target for tail_l1; <= 0 selects default_epsilon(q).
    double epsilon = 0.0;
    std::size_t max_terms = 100000;
    /// Use exactly this many terms instead of solving for N.
    std::optional<std::size_t> fixed_terms;
};

/**
 * Result of summing f = 1/2 sum_{n<=N} c_n 4^n (*^n u).
 *
 * The sum is carried out as 1/2 sum c_n q^n (*^n w) with w = u/b and
 * q = 4b, so every iterated power is a probability density and nothing
 * under- or overflows at large n. tail_l1 = tail_bound(N, q)/2 bounds the
 * L1 mass of the dropped terms.
 */
struct SeriesBuild {
    GridFunction u;
    double b = 0.0;
    double q = 0.0;
    double epsilon = 0.0;
    std::size_t n_terms = 0;
    double tail_l1 = 0.0;
    GridFunction f;
    std::vector<std::string> warnings;
};

/**
 * Series solution of f - f*f = u for a nonnegative residual u with mass at
 * most 1/4. Values of u in [-1e-12, 0) are clamped to zero with a warning;
 * anything more negative is rejected. Throws std::domain_error if
 * b > (1 + 1e-6)/4 and std::runtime_error if no N <= max_terms meets the
 * target.
 */
SeriesBuild build_series(const GridFunction& u, const SeriesOptions& options);
SeriesBuild build_series(const GridFunction& u, double epsilon);

/// tail_l1 * max(u/b): bounds the pointwise size of the dropped terms.
double pointwise_tail_bound(const SeriesBuild& build);

struct SpectralOptions {
    /// Zero-padding factor per axis before transforming u.
    std::size_t padding = 2;
};

/**
 * f^ = (1 - sqrt(1 - 4 u^))/2 with the principal square root, inverted
 * back to the window of u.
 *
 * Fails if |u^(k)| > 1/4 + 1e-6 at some k != 0, if 1 - 4u^(0) < -1e-9
 * (mass above 1/4; smaller negatives are clamped to zero), or if the root
 * jumps branch between neighbouring frequencies.
 */
GridFunction build_spectral(const GridFunction& u, const SpectralOptions& options = {});

/// h^d sum |f_series - f_spectral|.
double crosscheck(const SeriesBuild& series, const GridFunction& spectral);

/// Compactly supported residual on [-1, 1]^d.
struct CompactBump {
    enum class Shape { box, cosine };
    Shape shape = Shape::box;
};

/// The bump sampled on spec and rescaled to mass r.
GridFunction compact_bump(const GridSpec& spec, double r, const CompactBump& bump);

/// Series build from a compact residual of mass r < 1/4; such f has finite exponential moments.
SeriesBuild build_exponential_example(const GridSpec& spec, double r, const CompactBump& bump,
                                      double epsilon = 1e-12);

}  // namespace autoconv
