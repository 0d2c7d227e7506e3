#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace autoconv::detail {

/// In-place multidimensional FFT over an n^dim row-major block.
/// Forward is unnormalized with e^{-i}; inverse carries the 1/n^dim factor.
void fft_inplace(std::vector<std::complex<double>>& data, int dim, std::size_t n, bool inverse);

}  // namespace autoconv::detail
