#pragma once

#include <cstddef>
#include <vector>

#include "eeg/signal.hpp"

// Empirical mode decomposition by iterative sifting. Envelopes are natural
// cubic splines through the extrema, with the two nearest extrema mirrored
// past each endpoint to suppress end swings. Sifting of one mode stops once
// the Cauchy-type SD criterion, the extrema/zero-crossing balance, and the
// envelope-mean RMS bound all hold, or the iteration cap is reached.

namespace eeg::emd {

struct SiftConfig {
  int max_imfs = 10;
  int max_sift_iterations = 50;
  double sd_threshold = 0.2;
  double envelope_tolerance = 0.05;
};

struct Imf {
  std::vector<double> samples;
  int index = 0;  // 1-based extraction order
};

struct ImfDecomposition {
  std::vector<Imf> imfs;
  std::vector<double> residue;
  std::size_t source_length = 0;
};

// (upper + lower)/2 envelope mean. Requires >= 2 maxima and >= 2 minima;
// otherwise throws std::invalid_argument("insufficient extrema"), which is
// the sifting termination signal.
std::vector<double> envelope_mean(const Signal& x, const ExtremaIndex& extrema);

Imf sift_imf(const Signal& x, const SiftConfig& cfg);

// Extracts modes from the running residue until it is monotone or has too
// few extrema, or max_imfs is reached. The residue is maintained by
// subtraction, so the modes plus residue reconstruct the input exactly up
// to rounding.
ImfDecomposition decompose(const Signal& x, const SiftConfig& cfg = {});

// Sign changes across consecutive nonzero-signed samples.
std::size_t count_zero_crossings(const std::vector<double>& v);

// IMF condition 1: |#extrema - #zero-crossings| <= 1.
bool imf_condition1(const std::vector<double>& v);

// RMS(envelope mean) / RMS(samples); the soft condition-2 measure. Returns
// 0 for signals whose envelopes cannot be formed.
double envelope_mean_rms_ratio(const std::vector<double>& v, double fs);

// Natural cubic spline through (xs, ys) evaluated at integer points
// [0, n). Exposed for the spline oracle tests.
std::vector<double> natural_spline_at_indices(const std::vector<double>& xs,
                                              const std::vector<double>& ys,
                                              std::size_t n);

}  // namespace eeg::emd
