#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace autoconv {

/// A point of R^d, d <= 3.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

/// Pointwise evaluator R^d -> R.
using Evaluator = std::function<double(const Point&)>;

/**
 * Uniform centered grid on [-L, L)^d.
 *
 * Nodes are x_j = -L + j h per axis with h = 2L/N and N a power of two,
 * so the node set contains the origin at j = N/2. Values on the grid are
 * stored row-major (last axis fastest).
 */
class GridSpec {
public:
    GridSpec() = default;
    GridSpec(int dim, double extent, std::size_t points_per_axis);

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    std::size_t points_per_axis() const { return n_; }
    double spacing() const { return 2.0 * extent_ / static_cast<double>(n_); }
    /// h^d, the quadrature weight of one node.
    double cell_volume() const { return std::pow(spacing(), dim_); }
    std::size_t size() const;

    /// Coordinate of index j along any axis.
    double coordinate(std::size_t j) const {
        return -extent_ + static_cast<double>(j) * spacing();
    }
    /// Frequency k_m = m/(2L) of spectrum index i, m = i - N/2.
    double frequency(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n_ / 2)) / (2.0 * extent_);
    }

    Point node(std::size_t flat) const;
    /// Per-axis indices of a flat index.
    Eigen::Array<std::size_t, Eigen::Dynamic, 1, 0, 3, 1> unflatten(std::size_t flat) const;
    /// Index of the node at the origin.
    std::size_t origin_index() const;

    bool operator==(const GridSpec& other) const {
        return dim_ == other.dim_ && extent_ == other.extent_ && n_ == other.n_;
    }
    bool operator!=(const GridSpec& other) const { return !(*this == other); }

    std::string describe() const;

private:
    int dim_ = 1;
    double extent_ = 1.0;
    std::size_t n_ = 8;
};

/**
 * Values sampled on a GridSpec. Scalar is double for functions and
 * std::complex<double> for complex-valued results of an inverse transform.
 * Every value must be finite; this is checked on construction.
 */
template <typename Scalar>
class GridField {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    GridField() = default;

    explicit GridField(const GridSpec& spec)
        : spec_(spec), values_(Vector::Zero(static_cast<Eigen::Index>(spec.size()))) {}

    GridField(const GridSpec& spec, Vector values) : spec_(spec), values_(std::move(values)) {
        if (static_cast<std::size_t>(values_.size()) != spec_.size()) {
            throw std::invalid_argument("GridField: value count " + std::to_string(values_.size()) +
                                        " does not match grid size " +
                                        std::to_string(spec_.size()));
        }
        for (Eigen::Index i = 0; i < values_.size(); ++i) {
            if (!is_finite(values_[i])) {
                throw std::domain_error("GridField: non-finite value at flat index " +
                                        std::to_string(i));
            }
        }
    }

    const GridSpec& spec() const { return spec_; }
    const Vector& values() const { return values_; }
    Scalar operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    /// Value at the node closest to the origin.
    Scalar at_origin() const { return (*this)[spec_.origin_index()]; }

private:
    static bool is_finite(const Scalar& v) {
        if constexpr (std::is_floating_point_v<Scalar>) {
            return std::isfinite(v);
        } else {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        }
    }

    GridSpec spec_;
    Vector values_;
};

using GridFunction = GridField<double>;
using ComplexGridFunction = GridField<std::complex<double>>;

/**
 * Scaled DFT of a GridFunction approximating the continuous transform
 * f^(k) = int e^{-i 2 pi k.x} f(x) dx at k_m = m/(2L), m in [-N/2, N/2).
 * Stored row-major with index i = m + N/2 per axis, so k = 0 sits at the
 * same flat index as the origin of the spatial grid.
 */
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(const GridSpec& spec, Eigen::VectorXcd values);

    const GridSpec& spec() const { return spec_; }
    const Eigen::VectorXcd& values() const { return values_; }
    std::complex<double> operator[](std::size_t i) const {
        return values_[static_cast<Eigen::Index>(i)];
    }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    Point frequency(std::size_t flat) const;
    std::complex<double> at_zero() const { return (*this)[spec_.origin_index()]; }

    /// max |S(k) - conj(S(-k))| / max|S| over pairs with both k and -k on the lattice.
    double conjugate_symmetry_defect() const;

private:
    GridSpec spec_;
    Eigen::VectorXcd values_;
};

/// values[j] = evaluator(x_j). Throws naming the node if a value is non-finite.
GridFunction sample(const GridSpec& spec, const Evaluator& evaluator);

/// h^d * sum of values.
double integrate(const GridFunction& g);

/// h^d * sum |g|.
double l1_norm(const GridFunction& g);

/// h^d * sum |x_j|^p g_j over the whole window.
double moment(const GridFunction& g, double p);

/// Truncated moment over nodes with max_i |x_i| <= radius.
double moment_in_window(const GridFunction& g, double p, double radius);

/**
 * Linear (non-circular) convolution restricted to the window of the inputs.
 *
 * Both operands are zero-padded to 2N per axis before the transform, so
 * nothing wraps around. Throws on mismatched grids or if the inverse
 * transform leaves an imaginary residue above 1e-9 of the result.
 */
GridFunction convolve(const GridFunction& g1, const GridFunction& g2);

/**
 * Holds the padded transform of a fixed kernel so repeated convolutions
 * against it cost one forward and one inverse FFT each.
 */
class ConvolutionKernel {
public:
    explicit ConvolutionKernel(const GridFunction& kernel);

    const GridSpec& spec() const { return spec_; }
    GridFunction apply(const GridFunction& g) const;

private:
    GridSpec spec_;
    std::vector<std::complex<double>> padded_transform_;
};

Spectrum dft(const GridFunction& g);

/// Inverse of dft. Throws if the spectrum is not conjugate symmetric within 1e-10.
GridFunction idft(const Spectrum& s);

/// Inverse of dft without the symmetry requirement.
ComplexGridFunction idft_complex(const Spectrum& s);

/// Pointwise a*f + b*g on a common grid.
GridFunction linear_combination(double a, const GridFunction& f, double b, const GridFunction& g);

GridFunction scaled(const GridFunction& g, double factor);

/// The central [-L/factor, L/factor)^d part of g; factor is a power of two.
GridFunction crop(const GridFunction& g, std::size_t factor);

}  // namespace autoconv
