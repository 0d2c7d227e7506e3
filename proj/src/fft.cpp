#include "fft.hpp"

#include <unsupported/Eigen/FFT>

namespace autoconv::detail {

void fft_inplace(std::vector<std::complex<double>>& data, int dim, std::size_t n, bool inverse) {
    // Eigen::FFT caches twiddle plans internally and is not safe to share.
    thread_local Eigen::FFT<double> engine;
    std::vector<std::complex<double>> line(n);
    std::vector<std::complex<double>> out(n);

    std::size_t stride = data.size();
    for (int axis = 0; axis < dim; ++axis) {
        stride /= n;
        const std::size_t blocks = data.size() / (n * stride);
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t s = 0; s < stride; ++s) {
                const std::size_t base = b * n * stride + s;
                if (stride == 1) {
                    std::complex<double>* p = data.data() + base;
                    if (inverse) {
                        engine.inv(out.data(), p, static_cast<Eigen::Index>(n));
                    } else {
                        engine.fwd(out.data(), p, static_cast<Eigen::Index>(n));
                    }
                    std::copy(out.begin(), out.end(), p);
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    line[j] = data[base + j * stride];
                }
                if (inverse) {
                    engine.inv(out.data(), line.data(), static_cast<Eigen::Index>(n));
                } else {
                    engine.fwd(out.data(), line.data(), static_cast<Eigen::Index>(n));
                }
                for (std::size_t j = 0; j < n; ++j) {
                    data[base + j * stride] = out[j];
                }
            }
        }
    }
}

}  // namespace autoconv::detail
