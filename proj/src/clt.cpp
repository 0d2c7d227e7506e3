#include "autoconv/clt.hpp"

#include "autoconv/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace autoconv {

namespace {

using cd = std::complex<double>;

constexpr std::size_t kReanchor = 256;
constexpr std::size_t kMcBlock = 1024;

// e^{-i 2 pi kappa x_j} for j = 0..n-1, by rotation with periodic re-anchoring.
void fill_phases(Eigen::VectorXcd& out, double kappa, const GridSpec& spec) {
    const std::size_t n = spec.points_per_axis();
    const double h = spec.spacing();
    const double two_pi = 2.0 * std::numbers::pi;
    const cd step = std::polar(1.0, -two_pi * kappa * h);
    cd current;
    for (std::size_t j = 0; j < n; ++j) {
        if (j % kReanchor == 0) {
            current = std::polar(1.0, -two_pi * kappa * spec.coordinate(j));
        }
        out[static_cast<Eigen::Index>(j)] = current;
        current *= step;
    }
}

// Characteristic function of w at k/scale for every frequency of out_spec.
Eigen::VectorXcd characteristic(const GridFunction& w, const GridSpec& out_spec, double scale) {
    const GridSpec& spec = w.spec();
    const int dim = spec.dim();
    const std::size_t n_in = spec.points_per_axis();
    const std::size_t n_out = out_spec.points_per_axis();

    std::vector<std::size_t> shape(static_cast<std::size_t>(dim), n_in);
    std::vector<cd> data(w.values().data(), w.values().data() + w.size());
    Eigen::VectorXcd phases(static_cast<Eigen::Index>(n_in));

    for (int axis = 0; axis < dim; ++axis) {
        std::size_t outer = 1;
        std::size_t inner = 1;
        for (int a = 0; a < axis; ++a) {
            outer *= shape[static_cast<std::size_t>(a)];
        }
        for (int a = axis + 1; a < dim; ++a) {
            inner *= shape[static_cast<std::size_t>(a)];
        }
        std::vector<cd> next(outer * n_out * inner);
        for (std::size_t m = 0; m < n_out; ++m) {
            fill_phases(phases, out_spec.frequency(m) / scale, spec);
            for (std::size_t o = 0; o < outer; ++o) {
                for (std::size_t i = 0; i < inner; ++i) {
                    // Spelled out: std::complex operator* goes through __muldc3.
                    double re = 0.0;
                    double im = 0.0;
                    const std::size_t base = o * n_in * inner + i;
                    for (std::size_t j = 0; j < n_in; ++j) {
                        const cd p = phases[static_cast<Eigen::Index>(j)];
                        const cd v = data[base + j * inner];
                        re += p.real() * v.real() - p.imag() * v.imag();
                        im += p.real() * v.imag() + p.imag() * v.real();
                    }
                    next[(o * n_out + m) * inner + i] = cd(re, im);
                }
            }
        }
        data = std::move(next);
        shape[static_cast<std::size_t>(axis)] = n_out;
    }
    Eigen::VectorXcd out = Eigen::Map<Eigen::VectorXcd>(data.data(), static_cast<Eigen::Index>(data.size()));
    return spec.cell_volume() * out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1).
double open_unit(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

double draw(VarianceClass kind, std::mt19937_64& gen) {
    const double v = open_unit(gen);
    if (kind == VarianceClass::finite) {
        return std::sqrt(3.0) * (2.0 * v - 1.0);
    }
    return heavy_tail_quantile(v);
}

// Counts of |n^{-1/2} sum| <= R for every radius, over `samples` replicates.
std::vector<std::size_t> monte_carlo_counts(VarianceClass kind, int n,
                                            const std::vector<double>& radii,
                                            std::size_t samples, std::uint64_t seed,
                                            unsigned threads) {
    const std::size_t blocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<std::vector<std::size_t>> per_block(blocks,
                                                    std::vector<std::size_t>(radii.size(), 0));
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    auto run_block = [&](std::size_t block) {
        std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(n) << 32 ^ block)));
        const std::size_t begin = block * kMcBlock;
        const std::size_t end = std::min(samples, begin + kMcBlock);
        for (std::size_t r = begin; r < end; ++r) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                sum += draw(kind, gen);
            }
            const double z = std::abs(sum * inv_sqrt_n);
            for (std::size_t i = 0; i < radii.size(); ++i) {
                if (z <= radii[i]) {
                    ++per_block[block][i];
                }
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            run_block(b);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t b = t; b < blocks; b += workers) {
                    run_block(b);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::vector<std::size_t> counts(radii.size(), 0);
    for (const auto& block : per_block) {
        for (std::size_t i = 0; i < radii.size(); ++i) {
            counts[i] += block[i];
        }
    }
    return counts;
}

}  // namespace

GridFunction rescaled_density(const GridFunction& w, int n, const GridSpec& out_spec,
                              std::vector<std::string>* warnings) {
    if (n < 1) {
        throw std::invalid_argument("rescaled_density: n must be >= 1");
    }
    if (w.spec().dim() != out_spec.dim()) {
        throw std::invalid_argument("rescaled_density: dimension mismatch");
    }
    const double mass = integrate(w);
    if (std::abs(mass - 1.0) > 1e-4) {
        std::ostringstream msg;
        msg << "rescaled_density: w must be a probability density, mass = " << mass;
        throw std::invalid_argument(msg.str());
    }
    const Eigen::VectorXcd c = characteristic(w, out_spec, std::sqrt(static_cast<double>(n)));
    Eigen::VectorXcd powered(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const cd z = c[i] / mass;
        const double magnitude = std::abs(z);
        powered[i] = magnitude == 0.0
                         ? cd(0.0)
                         : std::polar(std::exp(n * std::log(magnitude)), n * std::arg(z));
    }
    const GridFunction raw = idft(Spectrum(out_spec, std::move(powered)));

    Eigen::VectorXd values = raw.values();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0 && values[i] >= -1e-8) {
            values[i] = 0.0;
        }
    }
    GridFunction density(out_spec, std::move(values));
    const double out_mass = integrate(density);
    if (warnings != nullptr && std::abs(out_mass - 1.0) > 0.02) {
        std::ostringstream msg;
        msg << "rescaled density for n = " << n << " has mass " << out_mass;
        warnings->push_back(msg.str());
    }
    return density;
}

double ball_mass(const GridFunction& density, double R) {
    const GridSpec& spec = density.spec();
    double sum = 0.0;
    if (spec.dim() == 1) {
        // Each node owns the cell [x - h/2, x + h/2]; weight by its overlap with [-R, R].
        const double h = spec.spacing();
        for (std::size_t j = 0; j < density.size(); ++j) {
            const double x = spec.coordinate(j);
            const double overlap = std::min(x + 0.5 * h, R) - std::max(x - 0.5 * h, -R);
            sum += std::clamp(overlap / h, 0.0, 1.0) * density[j];
        }
        return h * sum;
    }
    for (std::size_t flat = 0; flat < density.size(); ++flat) {
        if (spec.node(flat).norm() <= R) {
            sum += density[flat];
        }
    }
    return spec.cell_volume() * sum;
}

double phi_functional(const GridFunction& density) {
    const GridSpec& spec = density.spec();
    double sum = 0.0;
    for (std::size_t flat = 0; flat < density.size(); ++flat) {
        sum += std::min(1.0, spec.node(flat).norm()) * density[flat];
    }
    return spec.cell_volume() * sum;
}

std::vector<CltResult> run_experiment(VarianceClass kind, const std::vector<double>& radii,
                                      const std::vector<int>& n_list, std::size_t mc_samples,
                                      const CltOptions& options) {
    if (n_list.empty()) {
        throw std::invalid_argument("run_experiment: empty n list");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw std::invalid_argument("run_experiment: n list must be positive and increasing");
        }
    }
    for (const double R : radii) {
        if (!(R > 0.0)) {
            throw std::invalid_argument("run_experiment: radii must be positive");
        }
    }

    const bool finite = kind == VarianceClass::finite;
    const double w_extent = options.w_extent > 0.0 ? options.w_extent : (finite ? 4.0 : 1024.0);
    const std::size_t w_points = options.w_points > 0 ? options.w_points : (finite ? 8192 : 32768);
    const GridSpec w_spec(1, w_extent, w_points);
    const GridSpec out_spec(1, options.out_extent, options.out_points);

    GridFunction w = sample(w_spec, finite ? unit_variance_uniform() : heavy_tail_density());
    w = scaled(w, 1.0 / integrate(w));

    std::vector<CltResult> results(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        CltResult& r = results[i];
        r.R = radii[i];
        r.variance_class = kind;
        r.n_list = n_list;
        r.seed = options.seed;
        if (finite) {
            r.gaussian_target = std::erf(radii[i] / std::numbers::sqrt2);
        }
    }

    for (const int n : n_list) {
        std::vector<std::string> warnings;
        const GridFunction density = rescaled_density(w, n, out_spec, &warnings);
        const double mass = integrate(density);
        const double phi = phi_functional(density);
        for (auto& r : results) {
            r.p_values.push_back(ball_mass(density, r.R));
            r.phi_values.push_back(phi);
            r.masses.push_back(mass);
            r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
        }
        if (mc_samples > 0) {
            const auto counts =
                monte_carlo_counts(kind, n, radii, mc_samples, options.seed, options.threads);
            for (std::size_t i = 0; i < radii.size(); ++i) {
                const double p = static_cast<double>(counts[i]) / static_cast<double>(mc_samples);
                results[i].mc_values.push_back(p);
                results[i].mc_stderr.push_back(
                    std::sqrt(p * (1.0 - p) / static_cast<double>(mc_samples)));
            }
        }
    }
    return results;
}

CltResult run_experiment(VarianceClass kind, double R, const std::vector<int>& n_list,
                         std::size_t mc_samples, const CltOptions& options) {
    return run_experiment(kind, std::vector<double>{R}, n_list, mc_samples, options).front();
}

VarianceClass parse_variance_class(const std::string& name) {
    if (name == "finite" || name == "finite_variance") {
        return VarianceClass::finite;
    }
    if (name == "infinite" || name == "infinite_variance") {
        return VarianceClass::infinite;
    }
    throw std::invalid_argument("unknown w_kind '" + name + "' (finite_variance|infinite_variance)");
}

std::string to_string(VarianceClass v) {
    return v == VarianceClass::finite ? "finite_variance" : "infinite_variance";
}

}  // namespace autoconv
