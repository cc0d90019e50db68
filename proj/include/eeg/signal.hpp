#pragma once

#include <cstddef>
#include <vector>

namespace eeg {

// Uniformly sampled single-channel time series. All analysis runs in
// 64-bit floating point end to end.
struct Signal {
  std::vector<double> samples;
  double fs = 0.0;  // Hz

  std::size_t size() const { return samples.size(); }
  double duration_s() const { return static_cast<double>(samples.size()) / fs; }
};

// Throws std::invalid_argument naming the first offending sample if the
// signal is empty, has fs <= 0, or contains non-finite values.
void validate_signal(const Signal& x);

struct AnalyticSignal {
  std::vector<double> real;  // equals the input samples
  std::vector<double> imag;  // discrete Hilbert transform of the input
  double fs = 0.0;

  std::vector<double> envelope() const;  // sqrt(real^2 + imag^2)
};

// Interior local extrema; strictly increasing indices in [1, N-2] with
// maxima and minima interleaving.
struct ExtremaIndex {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

// Frequency-domain analytic signal: zero negative frequencies, double
// positive ones, keep DC (and Nyquist for even N) unscaled.
AnalyticSignal analytic_signal(const Signal& x);

// Interior local maxima/minima; a plateau run yields one extremum at the
// run midpoint (floor on even-length runs).
ExtremaIndex find_extrema(const Signal& x);

// Fixed-length windows of window_s seconds hopped by hop_s seconds;
// trailing samples that do not fill a window are dropped.
std::vector<Signal> segment_windows(const Signal& x, double window_s, double hop_s);

}  // namespace eeg
