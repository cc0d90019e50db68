#pragma once

#include <cstddef>
#include <vector>

#include "eeg/emd.hpp"
#include "eeg/signal.hpp"

// Instantaneous amplitude/frequency per mode and the binned spectra built
// from them: the time-frequency Hilbert spectrum, its time-summed marginal,
// and the two-level holospectrum over (carrier frequency, AM frequency).

namespace eeg::hht {

struct InstantaneousAttributes {
  std::vector<double> amplitude;  // >= 0, analytic-signal envelope
  std::vector<double> frequency;  // Hz, clamped to [0, fs/2]
  double fs = 0.0;
};

struct SpectrumConfig {
  double freq_min = 5.0;   // Hz
  double freq_max = 45.0;  // Hz
  int n_bins = 64;
};

struct HilbertSpectrum {
  std::vector<double> grid;  // n_bins x n_samples, row-major by bin
  std::vector<double> bin_edges;
  std::size_t n_bins = 0;
  std::size_t n_samples = 0;

  double& at(std::size_t bin, std::size_t t) { return grid[bin * n_samples + t]; }
  double at(std::size_t bin, std::size_t t) const { return grid[bin * n_samples + t]; }
};

struct MarginalSpectrum {
  std::vector<double> values;  // per frequency bin
  std::vector<double> bin_edges;
};

struct HoloSpectrum {
  std::vector<double> grid;  // carrier bins x AM bins, row-major by carrier
  std::vector<double> carrier_edges;
  std::vector<double> am_edges;
  std::size_t n_carrier = 0;
  std::size_t n_am = 0;

  double& at(std::size_t c, std::size_t a) { return grid[c * n_am + a]; }
  double at(std::size_t c, std::size_t a) const { return grid[c * n_am + a]; }
};

// Linearly spaced edges: edge_k = freq_min + k * (freq_max - freq_min) / n_bins.
std::vector<double> make_bin_edges(const SpectrumConfig& cfg);

// Bin index of frequency f, or -1 when f lies outside [freq_min, freq_max].
// Values within a part-per-billion of an edge bin upward so that exact-edge
// frequencies land deterministically; freq_max maps to the top bin.
int bin_index(double f, const SpectrumConfig& cfg);

// Envelope amplitude and unwrapped-phase central-difference frequency.
// Endpoint frequencies use one-sided differences.
InstantaneousAttributes instantaneous_attributes(const emd::Imf& imf, double fs);

HilbertSpectrum hilbert_spectrum(const std::vector<emd::Imf>& imfs, double fs,
                                 const SpectrumConfig& cfg);

// Row sums of the Hilbert spectrum.
MarginalSpectrum marginal_spectrum(const HilbertSpectrum& H);

// First-level EMD, second-level EMD of each mode's amplitude envelope, and
// accumulation of second-level amplitude into (carrier bin, AM bin) cells.
HoloSpectrum holo_spectrum(const Signal& x, const SpectrumConfig& carrier_cfg,
                           const SpectrumConfig& am_cfg, const emd::SiftConfig& sift);

}  // namespace eeg::hht
