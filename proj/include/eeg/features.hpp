#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eeg/emd.hpp"
#include "eeg/hilbert.hpp"
#include "eeg/signal.hpp"

namespace eeg::feat {

struct BandDefinition {
  std::string name;
  double lo = 0.0;  // Hz
  double hi = 0.0;  // Hz, exclusive
};

// theta 4-8, alpha_low 8-10, alpha_high 10-13, beta 13-25, gamma 25-40
std::vector<BandDefinition> default_bands();

// Per-mode statistics. ITED(t) = a(t)^2 is treated as an energy density
// over sample times and ISED as the histogram of a(t)^2 over instantaneous
// frequency (64 bins spanning [0, fs/2]); spread is the density standard
// deviation, deviation the mean absolute deviation. These definitions are
// normative for this library.
struct ImfFeatureVector {
  double energy = 0.0;    // sum of squared samples
  double sp_ited = 0.0;   // seconds
  double d_ited = 0.0;
  double sp_omega = 0.0;  // Hz
  double d_ised = 0.0;
};

struct HjorthParams {
  double mobility = 0.0;
  double complexity = 0.0;
};

// Higuchi fractal dimension; constant input yields 1.0 and sets *degenerate.
double higuchi_fd(const Signal& x, int k_max = 8, bool* degenerate = nullptr);

double petrosian_fd(const Signal& x);

HjorthParams hjorth(const Signal& x);

// Detrended fluctuation analysis exponent over the given box sizes
// (defaults to 10 log-spaced sizes in [4, N/4] when empty).
double dfa(const Signal& x, std::vector<std::size_t> box_sizes = {});

// Rescaled-range Hurst exponent.
double hurst(const Signal& x);

// Welch-averaged band powers: Hann-tapered 4 s windows hopped by 2 s
// (or one full-length segment when the signal is shorter), periodograms
// averaged, PSD values summed over each band's [lo, hi) interval.
std::vector<double> psd_band_powers(const Signal& x, const std::vector<BandDefinition>& bands,
                                    double window_s = 4.0, double hop_s = 2.0);

struct SpectralSummary {
  std::vector<double> rir;  // per band, sums to 1
  double spectral_entropy = 0.0;  // normalized to [0, 1]
};

SpectralSummary rir_and_spectral_entropy(const std::vector<double>& psi);

ImfFeatureVector imf_features(const emd::Imf& imf, const hht::InstantaneousAttributes& attrs);

}  // namespace eeg::feat
