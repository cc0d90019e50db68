#include "eeg/signal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eeg/fft.hpp"

namespace eeg {

void validate_signal(const Signal& x) {
  if (x.samples.size() < 2) throw std::invalid_argument("signal needs at least 2 samples");
  if (!(x.fs > 0.0)) throw std::invalid_argument("sampling rate must be positive");
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    if (!std::isfinite(x.samples[i])) {
      throw std::invalid_argument("non-finite sample at index " + std::to_string(i));
    }
  }
}

std::vector<double> AnalyticSignal::envelope() const {
  std::vector<double> env(real.size());
  for (std::size_t i = 0; i < real.size(); ++i) env[i] = std::hypot(real[i], imag[i]);
  return env;
}

AnalyticSignal analytic_signal(const Signal& x) {
  validate_signal(x);
  const std::size_t n = x.samples.size();

  auto spec = fft::forward_real(x.samples);
  // One-sided spectrum weights: DC and (even-N) Nyquist stay, positives
  // double, negatives vanish.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
  for (std::size_t k = half + 1; k < n; ++k) spec[k] = 0.0;
  auto z = fft::inverse(spec);

  AnalyticSignal out;
  out.fs = x.fs;
  out.real = x.samples;
  out.imag.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.imag[i] = z[i].imag();
  return out;
}

ExtremaIndex find_extrema(const Signal& x) {
  const std::size_t n = x.samples.size();
  if (n < 3) throw std::invalid_argument("too short for extrema");
  const auto& v = x.samples;

  ExtremaIndex out;
  int last = 0;          // sign of the most recent nonzero difference
  std::size_t cand = 0;  // index where the current level started
  for (std::size_t i = 1; i < n; ++i) {
    const double d = v[i] - v[i - 1];
    const int s = (d > 0.0) - (d < 0.0);
    if (s == 0) continue;
    if (last == 1 && s == -1) {
      out.maxima.push_back((cand + i - 1) / 2);
    } else if (last == -1 && s == 1) {
      out.minima.push_back((cand + i - 1) / 2);
    }
    last = s;
    cand = i;
  }
  return out;
}

std::vector<Signal> segment_windows(const Signal& x, double window_s, double hop_s) {
  validate_signal(x);
  const double wf = window_s * x.fs;
  const double hf = hop_s * x.fs;
  const auto window = static_cast<std::size_t>(std::llround(wf));
  const auto hop = static_cast<std::size_t>(std::llround(hf));
  if (window == 0 || std::abs(wf - static_cast<double>(window)) > 1e-9) {
    throw std::invalid_argument("window length must be a positive whole number of samples");
  }
  if (hop == 0 || std::abs(hf - static_cast<double>(hop)) > 1e-9) {
    throw std::invalid_argument("hop length must be a positive whole number of samples");
  }
  const std::size_t n = x.samples.size();
  if (window > n) throw std::invalid_argument("window longer than signal");

  const std::size_t count = (n - window) / hop + 1;
  std::vector<Signal> windows;
  windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    const auto first = x.samples.begin() + static_cast<std::ptrdiff_t>(w * hop);
    windows.push_back(Signal{{first, first + static_cast<std::ptrdiff_t>(window)}, x.fs});
  }
  return windows;
}

}  // namespace eeg
