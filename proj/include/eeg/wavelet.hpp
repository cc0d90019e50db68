#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eeg/signal.hpp"

// Multilevel db4 analysis/synthesis with half-sample symmetric extension,
// and per-band energy/entropy features.
//
// Band indexing follows the published EEG convention for 128 Hz input:
// D1 is the 64-128 Hz slot, D2 gamma (32-64), D3 beta (16-32), D4 alpha
// (8-16), D5 theta (4-8). At a 128 Hz sampling rate the 64-128 Hz band lies
// beyond Nyquist, so D1 is identically zero and exists only to keep that
// indexing; the remaining details come from a genuine four-stage cascade.

namespace eeg::wavelet {

struct WaveletDecomposition {
  std::vector<std::vector<double>> details;  // D1..Dlevels, coarse last
  std::vector<double> approximation;
  std::size_t source_length = 0;
  std::vector<std::size_t> stage_lengths;  // input length of each real stage
};

struct BandFeature {
  std::string band;  // theta | alpha | beta | gamma
  double energy = 0.0;   // sum of squared coefficients
  double entropy = 0.0;  // Shannon entropy of normalized squared coeffs, nats
};

WaveletDecomposition dwt_decompose(const Signal& x, int levels = 5);

// Exact inverse of dwt_decompose (D1 carries no information).
std::vector<double> dwt_reconstruct(const WaveletDecomposition& dec);

// Energy and entropy for theta, alpha, beta, gamma; D1 is discarded.
std::vector<BandFeature> band_features(const WaveletDecomposition& dec);

// Single analysis/synthesis stages, exposed for the reconstruction tests.
void dwt_step(std::span<const double> x, std::vector<double>& approx,
              std::vector<double>& detail);
std::vector<double> idwt_step(const std::vector<double>& approx,
                              const std::vector<double>& detail, std::size_t n);

double band_energy(std::span<const double> coeffs);
double band_entropy(std::span<const double> coeffs);

}  // namespace eeg::wavelet
