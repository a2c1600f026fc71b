#ifndef QFLK_FFT_HPP
#define QFLK_FFT_HPP

#include <complex>
#include <vector>

#include "qflk/grid.hpp"

namespace qflk::fft {

/// Forward real transform; coefficients are normalized by 1/N so that the
/// k-th entry is the Fourier coefficient of exp(i k.x) in the half-spectrum
/// (r2c) layout described by TorusGrid::wavevector.
std::vector<std::complex<double>> forward(const TorusGrid& g, const std::vector<double>& values);

std::vector<double> inverse(const TorusGrid& g, const std::vector<std::complex<double>>& spec);

/// Full complex transforms (used by the wave-function solver); same 1/N
/// normalization on the forward direction.
std::vector<std::complex<double>> forward_c(const TorusGrid& g,
                                            const std::vector<std::complex<double>>& values);
std::vector<std::complex<double>> inverse_c(const TorusGrid& g,
                                            const std::vector<std::complex<double>>& spec);

}  // namespace qflk::fft

#endif
