#include "autoconv/construct.hpp"

#include "autoconv/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace autoconv {

namespace {

constexpr double kMassSlack = 1e-6;
constexpr double kClampFloor = -1e-12;
constexpr double kCriticalClamp = 1e-9;
constexpr double kSpectrumSlack = 1e-6;

std::size_t solve_term_count(const CoeffTable& table, double q, double epsilon,
                             std::size_t max_terms) {
    for (std::size_t n = 1; n <= max_terms; ++n) {
        if (0.5 * table.tail_bound(n, q) <= epsilon) {
            return n;
        }
    }
    std::ostringstream msg;
    msg << "build_series: " << max_terms << " terms reach only tail_l1 = "
        << 0.5 * table.tail_bound(max_terms, q) << " > epsilon = " << epsilon;
    throw std::runtime_error(msg.str());
}

// Index of the padded-grid node that holds window node `flat`.
std::size_t padded_index(const GridSpec& spec, std::size_t flat, std::size_t padding) {
    const std::size_t n = spec.points_per_axis();
    const std::size_t m = padding * n;
    const std::size_t offset = (m - n) / 2;
    const auto idx = spec.unflatten(flat);
    std::size_t p = 0;
    for (int axis = 0; axis < spec.dim(); ++axis) {
        p = p * m + idx[axis] + offset;
    }
    return p;
}

}  // namespace

double default_epsilon(double q) {
    if (q <= 0.9) {
        return 1e-4;
    }
    if (q <= 0.99) {
        return 1e-3;
    }
    return 1e-2;
}

SeriesBuild build_series(const GridFunction& u_in, const SeriesOptions& options) {
    SeriesBuild out;
    const GridSpec& spec = u_in.spec();

    Eigen::VectorXd u_values = u_in.values();
    std::size_t clamped = 0;
    for (Eigen::Index i = 0; i < u_values.size(); ++i) {
        if (u_values[i] < 0.0) {
            if (u_values[i] < kClampFloor) {
                std::ostringstream msg;
                msg << "build_series: residual u must be nonnegative, found " << u_values[i]
                    << " at x = (" << spec.node(static_cast<std::size_t>(i)).transpose() << ")";
                throw std::invalid_argument(msg.str());
            }
            u_values[i] = 0.0;
            ++clamped;
        }
    }
    if (clamped > 0) {
        out.warnings.push_back("clamped " + std::to_string(clamped) +
                               " slightly negative residual values to 0");
    }
    out.u = GridFunction(spec, std::move(u_values));
    out.b = integrate(out.u);
    out.q = 4.0 * out.b;
    if (out.b > 0.25 * (1.0 + kMassSlack)) {
        std::ostringstream msg;
        msg << "build_series: residual mass b = " << out.b << " violates 0 <= b <= 1/4";
        throw std::domain_error(msg.str());
    }
    if (options.max_terms < 1) {
        throw std::invalid_argument("build_series: max_terms must be >= 1");
    }
    const double q = std::min(out.q, 1.0);
    out.epsilon = options.epsilon > 0.0 ? options.epsilon : default_epsilon(q);

    const std::size_t table_size =
        std::max(options.max_terms, options.fixed_terms.value_or(1)) + 1;
    const CoeffTable table(table_size);

    if (out.b == 0.0) {
        out.n_terms = options.fixed_terms.value_or(1);
        out.tail_l1 = 0.0;
        out.f = GridFunction(spec);
        return out;
    }

    if (options.fixed_terms) {
        if (*options.fixed_terms < 1) {
            throw std::invalid_argument("build_series: fixed term count must be >= 1");
        }
        out.n_terms = *options.fixed_terms;
    } else {
        out.n_terms = solve_term_count(table, q, out.epsilon, options.max_terms);
    }
    out.tail_l1 = 0.5 * table.tail_bound(out.n_terms, q);

    const GridFunction w = scaled(out.u, 1.0 / out.b);
    const ConvolutionKernel kernel(w);
    Eigen::VectorXd power = w.values();
    double q_pow = out.q;
    Eigen::VectorXd acc = 0.5 * table.c(1) * q_pow * power;
    for (std::size_t n = 2; n <= out.n_terms; ++n) {
        power = kernel.apply(GridFunction(spec, std::move(power))).values();
        // Iterated powers of a density are nonnegative; negatives are FFT roundoff.
        power = power.cwiseMax(0.0);
        q_pow *= out.q;
        acc += (0.5 * table.c(n) * q_pow) * power;
    }
    out.f = GridFunction(spec, std::move(acc));
    return out;
}

SeriesBuild build_series(const GridFunction& u, double epsilon) {
    SeriesOptions options;
    options.epsilon = epsilon;
    return build_series(u, options);
}

double pointwise_tail_bound(const SeriesBuild& build) {
    if (build.b == 0.0) {
        return 0.0;
    }
    return build.tail_l1 * build.u.values().maxCoeff() / build.b;
}

GridFunction build_spectral(const GridFunction& u, const SpectralOptions& options) {
    if (options.padding < 1 || (options.padding & (options.padding - 1)) != 0) {
        throw std::invalid_argument("build_spectral: padding must be a power of two");
    }
    const GridSpec& spec = u.spec();
    if ((u.values().array() < kClampFloor).any()) {
        throw std::invalid_argument("build_spectral: residual u must be nonnegative");
    }
    const GridSpec big(spec.dim(), spec.extent() * static_cast<double>(options.padding),
                       spec.points_per_axis() * options.padding);
    GridFunction u_big = [&] {
        Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big.size()));
        for (std::size_t flat = 0; flat < u.size(); ++flat) {
            values[static_cast<Eigen::Index>(padded_index(spec, flat, options.padding))] =
                u[flat];
        }
        return GridFunction(big, std::move(values));
    }();

    const Spectrum u_hat = dft(u_big);
    const std::size_t zero = big.origin_index();
    Eigen::VectorXcd root(static_cast<Eigen::Index>(u_hat.size()));
    for (std::size_t i = 0; i < u_hat.size(); ++i) {
        std::complex<double> s = 1.0 - 4.0 * u_hat[i];
        if (i == zero) {
            if (s.real() < -kCriticalClamp) {
                std::ostringstream msg;
                msg << "build_spectral: 1 - 4 u^(0) = " << s.real()
                    << " < 0, residual mass exceeds 1/4";
                throw std::domain_error(msg.str());
            }
            s = std::max(s.real(), 0.0);
        } else if (std::abs(u_hat[i]) > 0.25 + kSpectrumSlack) {
            std::ostringstream msg;
            msg << "build_spectral: |u^(k)| = " << std::abs(u_hat[i]) << " > 1/4 at k = ("
                << u_hat.frequency(i).transpose()
                << "); discretization artifact, enlarge the domain";
            throw std::domain_error(msg.str());
        }
        root[static_cast<Eigen::Index>(i)] = std::sqrt(s);
    }

    // The root must not flip sign between neighbouring frequencies on any axis.
    const std::size_t m = big.points_per_axis();
    std::size_t stride = 1;
    for (int axis = big.dim() - 1; axis >= 0; --axis) {
        for (std::size_t i = 0; i < big.size(); ++i) {
            if ((i / stride) % m == m - 1) {
                continue;
            }
            const auto r0 = root[static_cast<Eigen::Index>(i)];
            const auto r1 = root[static_cast<Eigen::Index>(i + stride)];
            if ((r1 * std::conj(r0)).real() < 0.0) {
                std::ostringstream msg;
                msg << "build_spectral: square-root branch discontinuity between k = ("
                    << u_hat.frequency(i).transpose() << ") and its neighbour";
                throw std::domain_error(msg.str());
            }
        }
        stride *= m;
    }

    const Eigen::VectorXcd f_hat = 0.5 * (Eigen::VectorXcd::Ones(root.size()) - root);
    const ComplexGridFunction f_big = idft_complex(Spectrum(big, f_hat));

    Eigen::VectorXd values(static_cast<Eigen::Index>(spec.size()));
    double real_max = 0.0;
    double imag_max = 0.0;
    for (std::size_t flat = 0; flat < spec.size(); ++flat) {
        const auto v = f_big[padded_index(spec, flat, options.padding)];
        values[static_cast<Eigen::Index>(flat)] = v.real();
        real_max = std::max(real_max, std::abs(v.real()));
        imag_max = std::max(imag_max, std::abs(v.imag()));
    }
    if (imag_max > 1e-9 * real_max + std::numeric_limits<double>::min()) {
        std::ostringstream msg;
        msg << "build_spectral: imaginary residue " << imag_max << " exceeds 1e-9 of "
            << real_max;
        throw std::runtime_error(msg.str());
    }
    return GridFunction(spec, std::move(values));
}

double crosscheck(const SeriesBuild& series, const GridFunction& spectral) {
    if (series.f.spec() != spectral.spec()) {
        throw std::invalid_argument("crosscheck: grid mismatch");
    }
    return l1_norm(linear_combination(1.0, series.f, -1.0, spectral));
}

GridFunction compact_bump(const GridSpec& spec, double r, const CompactBump& bump) {
    const GridFunction shape = sample(spec, [&](const Point& x) {
        if (x.cwiseAbs().maxCoeff() > 1.0) {
            return 0.0;
        }
        if (bump.shape == CompactBump::Shape::box) {
            return 1.0;
        }
        double v = 1.0;
        for (int axis = 0; axis < x.size(); ++axis) {
            v *= 0.5 * (1.0 + std::cos(std::numbers::pi * x[axis]));
        }
        return v;
    });
    const double mass = integrate(shape);
    if (!(mass > 0.0)) {
        throw std::invalid_argument("compact_bump: grid too coarse to resolve [-1, 1]");
    }
    return scaled(shape, r / mass);
}

SeriesBuild build_exponential_example(const GridSpec& spec, double r, const CompactBump& bump,
                                      double epsilon) {
    if (!(r > 0.0) || r >= 0.25) {
        throw std::domain_error("build_exponential_example: need 0 < r < 1/4");
    }
    return build_series(compact_bump(spec, r, bump), epsilon);
}

}  // namespace autoconv
