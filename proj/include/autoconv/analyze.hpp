#pragma once

#include "autoconv/construct.hpp"
#include "autoconv/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace autoconv {

enum class Verdict { solution, violation };

/**
 * Outcome of checking f >= f*f on a grid.
 *
 * The violation scan skips a boundary band of width L/8 per axis, where the
 * windowed convolution undercounts f*f; the band minimum is reported
 * separately.
 */
struct SolutionReport {
    double a = 0.0;  ///< integral of f
    double b = 0.0;  ///< integral of u = f - f*f
    double min_residual = 0.0;
    double min_f = 0.0;
    double mass_relation_gap = 0.0;  ///< |(a - 1/2)^2 - (1/4 - b)|
    Verdict verdict = Verdict::solution;
    Point worst_location;
    double tolerance = 0.0;
    double band_width = 0.0;
    double band_min_residual = 0.0;
    GridFunction residual;
};

/// tolerance <= 0 selects 1e-6 max|f|.
SolutionReport verify(const GridFunction& f, double tolerance = 0.0);

/// Margin of the reversed inequality: min of f*f - f over the scan region.
struct ReverseReport {
    double min_margin = 0.0;
    Point location;
    bool strict = false;  ///< min_margin > 0
};

ReverseReport reverse_margin(const GridFunction& f);

struct PositivityResult {
    bool nonnegative = true;
    double min_value = 0.0;
    Point location;  ///< node of the most negative value
};

/// Flags values below -1e-12 max|f|.
PositivityResult positivity_check(const GridFunction& f);

enum class Growth { saturating, growing };

/**
 * Truncated moments M_p(l) on nested windows l = L/2^{levels-1}, ..., L.
 *
 * "growing" means the last two increments M_p(2l) - M_p(l) each stay above
 * 2^{-1/4} times the one before: a tail |x|^{-(d+1)} gives the ratio
 * 2^{p-1}, so p = 1 reads as growing and p = 1/2 as saturating. Increments
 * below 1e-8 |M_p(L)| count as zero. A finite grid cannot decide
 * divergence; this is a growth signature only.
 */
struct MomentReport {
    double p = 0.0;
    std::vector<double> windows;
    std::vector<double> values;
    std::vector<double> growth_increments;
    Growth classification = Growth::saturating;
    std::string note;
};

inline constexpr double kGrowthRatio = 0.8408964152537145;  // 2^{-1/4}

MomentReport moment_scan(const GridFunction& f, double p, int levels);

/// Least-squares fit of log f against |x| on |x| in [inner, 0.9 L].
struct TailFit {
    double rate = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< 1 - R^2 of the log-linear fit
    std::size_t points = 0;
};

inline constexpr double kExponentialFitResidual = 1e-2;

/// For d > 1 the profile along the positive first axis is fitted.
TailFit exp_tail_fit(const GridFunction& f, double inner);

/// rate < 0 and residual <= kExponentialFitResidual.
bool is_exponential(const TailFit& fit);

enum class MassRegime { critical, subcritical };

struct MomentDemoRow {
    MomentReport report;
    std::optional<Growth> expected;
};

struct MomentDemo {
    MassRegime regime = MassRegime::critical;
    double b = 0.0;
    double q = 0.0;
    std::size_t n_terms = 0;
    double tail_l1 = 0.0;
    double a = 0.0;
    double scan_extent = 0.0;
    std::vector<MomentDemoRow> rows;  ///< p = 0.5, 1, 2
};

/**
 * Builds f from a symmetric residual by the series and scans its moments
 * on the central half [-L/2, L/2)^d of the window. Critical (b = 1/4): p = 1 should grow, p = 1/2 saturate. Subcritical:
 * every p saturates, including p = 2.
 */
MomentDemo critical_moment_theorem_demo(const GridFunction& u, int levels, MassRegime regime,
                                        const SeriesOptions& options = {});

std::string to_string(Verdict v);
std::string to_string(Growth g);
std::string to_string(MassRegime r);

}  // namespace autoconv
