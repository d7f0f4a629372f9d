#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qet::fft {

// In-place 3D complex transform of an n*n*n array in row-major (x slowest)
// order. forward: sum_x f(x) e^{-2 pi i k.x / n}; backward uses e^{+...} and
// is unnormalized.
void transform_3d(std::span<std::complex<double>> data, std::size_t n, bool forward);

// Signed integer frequency of FFT index m on an n-point axis.
inline long frequency_index(std::size_t m, std::size_t n) {
    return m < (n + 1) / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

}  // namespace qet::fft
