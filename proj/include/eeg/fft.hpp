#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Complex FFTs of exact length N (no zero-padding) backed by FFTW's
// mixed-radix transforms. Plans use FFTW_ESTIMATE so the chosen algorithm,
// and therefore the output bit pattern, is stable across runs and thread
// counts. Inverse is normalized by 1/N.

namespace eeg::fft {

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);
std::vector<std::complex<double>> forward_real(std::span<const double> in);
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in);

// |X_k| for k = 0..N/2 of the real input's spectrum.
std::vector<double> magnitude_real(std::span<const double> in);

}  // namespace eeg::fft
