#include "autoconv/grid.hpp"

#include "fft.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace autoconv {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

// Spectrum order (i = m + N/2) <-> FFT order (m mod N). The map is an involution.
std::size_t shift_half(std::size_t flat, int dim, std::size_t n) {
    std::size_t out = 0;
    std::size_t stride = ipow(n, dim - 1);
    for (int axis = 0; axis < dim; ++axis) {
        const std::size_t i = (flat / stride) % n;
        out += ((i + n / 2) % n) * stride;
        stride /= n;
    }
    return out;
}

// (-1)^{m_1 + ... + m_d}; N/2 is even for N >= 8, so the parity of m equals that of i.
double alternating_sign(std::size_t flat, int dim, std::size_t n) {
    std::size_t parity = 0;
    std::size_t stride = ipow(n, dim - 1);
    for (int axis = 0; axis < dim; ++axis) {
        parity += (flat / stride) % n;
        stride /= n;
    }
    return (parity % 2 == 0) ? 1.0 : -1.0;
}

// Embeds a window of n^dim values into the low corner of a (2n)^dim block.
std::vector<std::complex<double>> pad(const GridFunction& g) {
    const GridSpec& spec = g.spec();
    const int dim = spec.dim();
    const std::size_t n = spec.points_per_axis();
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> out(ipow(m, dim), 0.0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = spec.unflatten(flat);
        std::size_t p = 0;
        for (int axis = 0; axis < dim; ++axis) {
            p = p * m + idx[axis];
        }
        out[p] = g[flat];
    }
    return out;
}

GridFunction extract_window(const std::vector<std::complex<double>>& padded, const GridSpec& spec,
                            double scale, const char* context) {
    const int dim = spec.dim();
    const std::size_t n = spec.points_per_axis();
    const std::size_t m = 2 * n;
    Eigen::VectorXd values(static_cast<Eigen::Index>(spec.size()));
    // Scale of the full padded result, so a window that is legitimately ~0 is not flagged.
    double real_max = 0.0;
    for (const auto& v : padded) {
        real_max = std::max(real_max, std::abs(v.real() * scale));
    }
    double imag_max = 0.0;
    for (std::size_t flat = 0; flat < spec.size(); ++flat) {
        const auto idx = spec.unflatten(flat);
        std::size_t p = 0;
        for (int axis = 0; axis < dim; ++axis) {
            p = p * m + idx[axis] + n / 2;
        }
        const std::complex<double> v = padded[p] * scale;
        values[static_cast<Eigen::Index>(flat)] = v.real();
        imag_max = std::max(imag_max, std::abs(v.imag()));
    }
    if (imag_max > 1e-9 * real_max + std::numeric_limits<double>::min()) {
        std::ostringstream msg;
        msg << context << ": imaginary residue " << imag_max << " exceeds 1e-9 of max |result| "
            << real_max;
        throw std::runtime_error(msg.str());
    }
    return GridFunction(spec, std::move(values));
}

}  // namespace

GridSpec::GridSpec(int dim, double extent, std::size_t points_per_axis)
    : dim_(dim), extent_(extent), n_(points_per_axis) {
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("GridSpec: dimension must be 1, 2 or 3");
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw std::invalid_argument("GridSpec: extent L must be positive and finite");
    }
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
        throw std::invalid_argument("GridSpec: points per axis must be a power of two >= 8, got " +
                                    std::to_string(points_per_axis));
    }
}

std::size_t GridSpec::size() const { return ipow(n_, dim_); }

Eigen::Array<std::size_t, Eigen::Dynamic, 1, 0, 3, 1> GridSpec::unflatten(std::size_t flat) const {
    Eigen::Array<std::size_t, Eigen::Dynamic, 1, 0, 3, 1> idx(dim_);
    for (int axis = dim_ - 1; axis >= 0; --axis) {
        idx[axis] = flat % n_;
        flat /= n_;
    }
    return idx;
}

Point GridSpec::node(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Point x(dim_);
    for (int axis = 0; axis < dim_; ++axis) {
        x[axis] = coordinate(idx[axis]);
    }
    return x;
}

std::size_t GridSpec::origin_index() const {
    std::size_t flat = 0;
    for (int axis = 0; axis < dim_; ++axis) {
        flat = flat * n_ + n_ / 2;
    }
    return flat;
}

std::string GridSpec::describe() const {
    std::ostringstream s;
    s << "d=" << dim_ << " L=" << extent_ << " N=" << n_;
    return s.str();
}

Spectrum::Spectrum(const GridSpec& spec, Eigen::VectorXcd values)
    : spec_(spec), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != spec_.size()) {
        throw std::invalid_argument("Spectrum: value count does not match grid size");
    }
}

Point Spectrum::frequency(std::size_t flat) const {
    const auto idx = spec_.unflatten(flat);
    Point k(spec_.dim());
    for (int axis = 0; axis < spec_.dim(); ++axis) {
        k[axis] = spec_.frequency(idx[axis]);
    }
    return k;
}

double Spectrum::conjugate_symmetry_defect() const {
    const int dim = spec_.dim();
    const std::size_t n = spec_.points_per_axis();
    const double scale = values_.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    double worst = 0.0;
    for (std::size_t flat = 0; flat < size(); ++flat) {
        const auto idx = spec_.unflatten(flat);
        if ((idx == 0).any()) {
            continue;  // m = -N/2 has no partner on the lattice
        }
        std::size_t partner = 0;
        for (int axis = 0; axis < dim; ++axis) {
            partner = partner * n + (n - idx[axis]);
        }
        worst = std::max(worst, std::abs((*this)[flat] - std::conj((*this)[partner])));
    }
    return worst / scale;
}

GridFunction sample(const GridSpec& spec, const Evaluator& evaluator) {
    Eigen::VectorXd values(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t flat = 0; flat < spec.size(); ++flat) {
        const Point x = spec.node(flat);
        const double v = evaluator(x);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "sample: evaluator returned " << v << " at node x = (" << x.transpose() << ")";
            throw std::domain_error(msg.str());
        }
        values[static_cast<Eigen::Index>(flat)] = v;
    }
    return GridFunction(spec, std::move(values));
}

double integrate(const GridFunction& g) { return g.spec().cell_volume() * g.values().sum(); }

double l1_norm(const GridFunction& g) {
    return g.spec().cell_volume() * g.values().cwiseAbs().sum();
}

double moment(const GridFunction& g, double p) {
    return moment_in_window(g, p, std::numeric_limits<double>::infinity());
}

double moment_in_window(const GridFunction& g, double p, double radius) {
    if (!(p >= 0.0)) {
        throw std::invalid_argument("moment: p must be >= 0");
    }
    const GridSpec& spec = g.spec();
    double sum = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const Point x = spec.node(flat);
        if (x.cwiseAbs().maxCoeff() > radius) {
            continue;
        }
        sum += std::pow(x.norm(), p) * g[flat];
    }
    return spec.cell_volume() * sum;
}

ConvolutionKernel::ConvolutionKernel(const GridFunction& kernel)
    : spec_(kernel.spec()), padded_transform_(pad(kernel)) {
    detail::fft_inplace(padded_transform_, spec_.dim(), 2 * spec_.points_per_axis(), false);
}

GridFunction ConvolutionKernel::apply(const GridFunction& g) const {
    if (g.spec() != spec_) {
        throw std::invalid_argument("convolve: grid mismatch (" + g.spec().describe() + " vs " +
                                    spec_.describe() + ")");
    }
    auto work = pad(g);
    const int dim = spec_.dim();
    const std::size_t m = 2 * spec_.points_per_axis();
    detail::fft_inplace(work, dim, m, false);
    for (std::size_t i = 0; i < work.size(); ++i) {
        work[i] *= padded_transform_[i];
    }
    detail::fft_inplace(work, dim, m, true);
    return extract_window(work, spec_, spec_.cell_volume(), "convolve");
}

GridFunction convolve(const GridFunction& g1, const GridFunction& g2) {
    if (g1.spec() != g2.spec()) {
        throw std::invalid_argument("convolve: grid mismatch (" + g1.spec().describe() + " vs " +
                                    g2.spec().describe() + ")");
    }
    return ConvolutionKernel(g2).apply(g1);
}

Spectrum dft(const GridFunction& g) {
    const GridSpec& spec = g.spec();
    const int dim = spec.dim();
    const std::size_t n = spec.points_per_axis();
    std::vector<std::complex<double>> work(g.values().data(), g.values().data() + g.size());
    detail::fft_inplace(work, dim, n, false);
    const double h_d = spec.cell_volume();
    Eigen::VectorXcd out(static_cast<Eigen::Index>(g.size()));
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        out[static_cast<Eigen::Index>(flat)] =
            h_d * alternating_sign(flat, dim, n) * work[shift_half(flat, dim, n)];
    }
    return Spectrum(spec, std::move(out));
}

ComplexGridFunction idft_complex(const Spectrum& s) {
    const GridSpec& spec = s.spec();
    const int dim = spec.dim();
    const std::size_t n = spec.points_per_axis();
    std::vector<std::complex<double>> work(s.size());
    const double inv_h_d = 1.0 / spec.cell_volume();
    for (std::size_t flat = 0; flat < s.size(); ++flat) {
        work[shift_half(flat, dim, n)] = inv_h_d * alternating_sign(flat, dim, n) * s[flat];
    }
    detail::fft_inplace(work, dim, n, true);
    Eigen::VectorXcd values = Eigen::Map<Eigen::VectorXcd>(work.data(), static_cast<Eigen::Index>(work.size()));
    return ComplexGridFunction(spec, std::move(values));
}

GridFunction idft(const Spectrum& s) {
    const double defect = s.conjugate_symmetry_defect();
    if (defect > 1e-10) {
        std::ostringstream msg;
        msg << "idft: spectrum is not conjugate symmetric (defect " << defect
            << "); request complex output instead";
        throw std::domain_error(msg.str());
    }
    const ComplexGridFunction z = idft_complex(s);
    return GridFunction(s.spec(), z.values().real());
}

GridFunction linear_combination(double a, const GridFunction& f, double b, const GridFunction& g) {
    if (f.spec() != g.spec()) {
        throw std::invalid_argument("linear_combination: grid mismatch");
    }
    return GridFunction(f.spec(), a * f.values() + b * g.values());
}

GridFunction scaled(const GridFunction& g, double factor) {
    return GridFunction(g.spec(), factor * g.values());
}

GridFunction crop(const GridFunction& g, std::size_t factor) {
    const GridSpec& spec = g.spec();
    if (!is_power_of_two(factor)) {
        throw std::invalid_argument("crop: factor must be a power of two");
    }
    const GridSpec inner(spec.dim(), spec.extent() / static_cast<double>(factor),
                         spec.points_per_axis() / factor);
    const std::size_t n = spec.points_per_axis();
    const std::size_t offset = (n - inner.points_per_axis()) / 2;
    Eigen::VectorXd values(static_cast<Eigen::Index>(inner.size()));
    for (std::size_t flat = 0; flat < inner.size(); ++flat) {
        const auto idx = inner.unflatten(flat);
        std::size_t source = 0;
        for (int axis = 0; axis < spec.dim(); ++axis) {
            source = source * n + idx[axis] + offset;
        }
        values[static_cast<Eigen::Index>(flat)] = g[source];
    }
    return GridFunction(inner, std::move(values));
}

}  // namespace autoconv
