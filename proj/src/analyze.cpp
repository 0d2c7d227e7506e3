#include "autoconv/analyze.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace autoconv {

namespace {

bool in_scan_region(const GridSpec& spec, std::size_t flat) {
    const double edge = spec.extent() - spec.extent() / 8.0;
    return spec.node(flat).cwiseAbs().maxCoeff() <= edge;
}

double max_symmetry_defect(const GridFunction& g) {
    const GridSpec& spec = g.spec();
    const std::size_t n = spec.points_per_axis();
    double worst = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = spec.unflatten(flat);
        if ((idx == 0).any()) {
            continue;  // x = -L has no mirror node
        }
        std::size_t mirror = 0;
        for (int axis = 0; axis < spec.dim(); ++axis) {
            mirror = mirror * n + (n - idx[axis]);
        }
        worst = std::max(worst, std::abs(g[flat] - g[mirror]));
    }
    return worst;
}

}  // namespace

SolutionReport verify(const GridFunction& f, double tolerance) {
    SolutionReport r;
    const GridSpec& spec = f.spec();
    const double f_max = f.values().cwiseAbs().maxCoeff();
    r.tolerance = tolerance > 0.0 ? tolerance : 1e-6 * f_max;
    r.band_width = spec.extent() / 8.0;
    r.residual = linear_combination(1.0, f, -1.0, convolve(f, f));
    r.a = integrate(f);
    r.b = integrate(r.residual);
    r.min_f = f.values().minCoeff();
    r.mass_relation_gap = std::abs((r.a - 0.5) * (r.a - 0.5) - (0.25 - r.b));

    r.min_residual = std::numeric_limits<double>::infinity();
    r.band_min_residual = std::numeric_limits<double>::infinity();
    std::size_t worst = spec.origin_index();
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const double v = r.residual[flat];
        if (in_scan_region(spec, flat)) {
            if (v < r.min_residual) {
                r.min_residual = v;
                worst = flat;
            }
        } else {
            r.band_min_residual = std::min(r.band_min_residual, v);
        }
    }
    r.worst_location = spec.node(worst);
    r.verdict = r.min_residual >= -r.tolerance ? Verdict::solution : Verdict::violation;
    return r;
}

ReverseReport reverse_margin(const GridFunction& f) {
    const GridSpec& spec = f.spec();
    const GridFunction ff = convolve(f, f);
    ReverseReport r;
    r.min_margin = std::numeric_limits<double>::infinity();
    std::size_t worst = spec.origin_index();
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        if (!in_scan_region(spec, flat)) {
            continue;
        }
        const double margin = ff[flat] - f[flat];
        if (margin < r.min_margin) {
            r.min_margin = margin;
            worst = flat;
        }
    }
    r.location = spec.node(worst);
    r.strict = r.min_margin > 0.0;
    return r;
}

PositivityResult positivity_check(const GridFunction& f) {
    PositivityResult r;
    Eigen::Index at = 0;
    r.min_value = f.values().minCoeff(&at);
    r.location = f.spec().node(static_cast<std::size_t>(at));
    const double scale = f.values().cwiseAbs().maxCoeff();
    r.nonnegative = !(r.min_value < -1e-12 * scale);
    return r;
}

MomentReport moment_scan(const GridFunction& f, double p, int levels) {
    if (!(p >= 0.0)) {
        throw std::invalid_argument("moment_scan: p must be >= 0");
    }
    if (levels < 3) {
        throw std::invalid_argument("moment_scan: need at least 3 levels");
    }
    MomentReport r;
    r.p = p;
    const double L = f.spec().extent();
    for (int k = levels - 1; k >= 0; --k) {
        const double radius = std::ldexp(L, -k);
        r.windows.push_back(radius);
        r.values.push_back(moment_in_window(f, p, radius));
    }
    for (std::size_t i = 1; i < r.values.size(); ++i) {
        r.growth_increments.push_back(r.values[i] - r.values[i - 1]);
    }

    const double floor = 1e-8 * std::abs(r.values.back());
    const auto& inc = r.growth_increments;
    const std::size_t n = inc.size();
    bool growing = true;
    for (std::size_t i = (n >= 3 ? n - 2 : 1); i < n; ++i) {
        if (!(inc[i] > floor && inc[i] > kGrowthRatio * inc[i - 1])) {
            growing = false;
        }
    }
    r.classification = growing ? Growth::growing : Growth::saturating;
    r.note =
        "nested-window growth signature; divergence of the full-space moment is not decidable "
        "on a finite grid";
    return r;
}

TailFit exp_tail_fit(const GridFunction& f, double inner) {
    const GridSpec& spec = f.spec();
    const double outer = 0.9 * spec.extent();
    if (!(inner >= 0.0) || inner >= outer) {
        throw std::invalid_argument("exp_tail_fit: need 0 <= inner < 0.9 L");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const Point x = spec.node(flat);
        if (spec.dim() > 1 && (x.tail(spec.dim() - 1).array() != 0.0).any()) {
            continue;
        }
        if (spec.dim() > 1 && x[0] < 0.0) {
            continue;
        }
        const double r = x.norm();
        if (r < inner || r > outer) {
            continue;
        }
        if (!(f[flat] > 0.0)) {
            std::ostringstream msg;
            msg << "exp_tail_fit: value " << f[flat] << " at |x| = " << r
                << " is not positive; raise a floor or shrink the fit region";
            throw std::domain_error(msg.str());
        }
        xs.push_back(r);
        ys.push_back(std::log(f[flat]));
    }
    if (xs.size() < 3) {
        throw std::invalid_argument("exp_tail_fit: fit region holds fewer than 3 nodes");
    }
    const Eigen::Map<const Eigen::VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
    const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    Eigen::MatrixXd design(x.size(), 2);
    design.col(0) = x;
    design.col(1).setOnes();
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);

    TailFit fit;
    fit.rate = coef[0];
    fit.intercept = coef[1];
    fit.points = xs.size();
    const double ss_res = (y - design * coef).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    fit.residual = ss_tot > 0.0 ? ss_res / ss_tot : 0.0;
    return fit;
}

bool is_exponential(const TailFit& fit) {
    return fit.rate < 0.0 && fit.residual <= kExponentialFitResidual;
}

MomentDemo critical_moment_theorem_demo(const GridFunction& u, int levels, MassRegime regime,
                                        const SeriesOptions& options) {
    const double scale = u.values().cwiseAbs().maxCoeff();
    if (max_symmetry_defect(u) > 1e-10 * std::max(scale, 1.0)) {
        throw std::invalid_argument(
            "critical_moment_theorem_demo: residual must be symmetric under x -> -x");
    }
    const double b = integrate(u);
    if (regime == MassRegime::critical && std::abs(b - 0.25) > 1e-6) {
        throw std::invalid_argument("critical_moment_theorem_demo: critical regime needs b = 1/4");
    }
    if (regime == MassRegime::subcritical && b >= 0.25) {
        throw std::invalid_argument(
            "critical_moment_theorem_demo: subcritical regime needs b < 1/4");
    }

    const SeriesBuild build = build_series(u, options);
    MomentDemo demo;
    demo.regime = regime;
    demo.b = build.b;
    demo.q = build.q;
    demo.n_terms = build.n_terms;
    demo.tail_l1 = build.tail_l1;
    demo.a = integrate(build.f);

    // Outer half is a buffer: restricting every power to the window thins f near the edge.
    const GridFunction inner = crop(build.f, 2);
    demo.scan_extent = inner.spec().extent();
    for (const double p : {0.5, 1.0, 2.0}) {
        MomentDemoRow row{moment_scan(inner, p, levels), std::nullopt};
        if (b == 0.0) {
            row.expected = Growth::saturating;
        } else if (regime == MassRegime::subcritical) {
            row.expected = Growth::saturating;
        } else if (p == 1.0) {
            row.expected = Growth::growing;
        } else if (p < 1.0) {
            row.expected = Growth::saturating;
        }
        demo.rows.push_back(std::move(row));
    }
    return demo;
}

std::string to_string(Verdict v) { return v == Verdict::solution ? "solution" : "violation"; }

std::string to_string(Growth g) { return g == Growth::growing ? "growing" : "saturating"; }

std::string to_string(MassRegime r) {
    return r == MassRegime::critical ? "critical" : "subcritical";
}

}  // namespace autoconv
