#pragma once

#include <complex>
#include <span>

#include "fbs/grid.hpp"

namespace fbs::fft {

// coeffs -> collocation values: f(x_j) = sum_k c_k exp(+2 pi i k.j / N).
// Unnormalized inverse DFT; in and out must be distinct buffers of grid.size().
void to_physical(const SpectralGrid& grid, std::span<const std::complex<double>> coeffs,
                 std::span<std::complex<double>> phys);

// collocation values -> coeffs, including the 1/N^n normalization.
void to_spectral(const SpectralGrid& grid, std::span<const std::complex<double>> phys,
                 std::span<std::complex<double>> coeffs);

}  // namespace fbs::fft
