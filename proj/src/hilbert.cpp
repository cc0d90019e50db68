#include "eeg/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eeg::hht {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Edge guard in bin units; see bin_index.
constexpr double kEdgeNudge = 1e-9;

void check_config(const SpectrumConfig& cfg) {
  if (!(cfg.freq_min > 0.0) || !(cfg.freq_min < cfg.freq_max) || cfg.n_bins < 1) {
    throw std::invalid_argument("invalid spectrum config");
  }
}
}  // namespace

std::vector<double> make_bin_edges(const SpectrumConfig& cfg) {
  check_config(cfg);
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_bins) + 1);
  const double width = (cfg.freq_max - cfg.freq_min) / cfg.n_bins;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    edges[k] = cfg.freq_min + static_cast<double>(k) * width;
  }
  return edges;
}

int bin_index(double f, const SpectrumConfig& cfg) {
  const double width = (cfg.freq_max - cfg.freq_min) / cfg.n_bins;
  const double u = (f - cfg.freq_min) / width + kEdgeNudge;
  if (u < 0.0) return -1;
  const double fl = std::floor(u);
  int idx = static_cast<int>(fl);
  if (idx >= cfg.n_bins) {
    // freq_max itself belongs to the top bin
    if (u - static_cast<double>(cfg.n_bins) <= 2.0 * kEdgeNudge) idx = cfg.n_bins - 1;
    else return -1;
  }
  return idx;
}

InstantaneousAttributes instantaneous_attributes(const emd::Imf& imf, double fs) {
  const std::size_t n = imf.samples.size();
  if (n < 4) throw std::invalid_argument("mode too short for instantaneous attributes");
  const auto z = analytic_signal(Signal{imf.samples, fs});

  InstantaneousAttributes out;
  out.fs = fs;
  out.amplitude = z.envelope();

  // unwrapped phase
  std::vector<double> phase(n);
  double offset = 0.0;
  double prev = std::atan2(z.imag[0], z.real[0]);
  phase[0] = prev;
  for (std::size_t i = 1; i < n; ++i) {
    double p = std::atan2(z.imag[i], z.real[i]);
    double d = p - prev;
    if (d > std::numbers::pi) offset -= kTwoPi;
    else if (d < -std::numbers::pi) offset += kTwoPi;
    prev = p;
    phase[i] = p + offset;
  }

  out.frequency.resize(n);
  const double nyquist = fs / 2.0;
  auto clamp = [nyquist](double f) { return f < 0.0 ? 0.0 : (f > nyquist ? nyquist : f); };
  out.frequency[0] = clamp((phase[1] - phase[0]) * fs / kTwoPi);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.frequency[i] = clamp((phase[i + 1] - phase[i - 1]) * fs / (2.0 * kTwoPi));
  }
  out.frequency[n - 1] = clamp((phase[n - 1] - phase[n - 2]) * fs / kTwoPi);
  return out;
}

HilbertSpectrum hilbert_spectrum(const std::vector<emd::Imf>& imfs, double fs,
                                 const SpectrumConfig& cfg) {
  if (imfs.empty()) throw std::invalid_argument("empty IMF list");
  check_config(cfg);

  HilbertSpectrum H;
  H.n_bins = static_cast<std::size_t>(cfg.n_bins);
  H.n_samples = imfs.front().samples.size();
  H.bin_edges = make_bin_edges(cfg);
  H.grid.assign(H.n_bins * H.n_samples, 0.0);

  for (const auto& imf : imfs) {
    const auto attrs = instantaneous_attributes(imf, fs);
    for (std::size_t t = 0; t < H.n_samples; ++t) {
      const int bin = bin_index(attrs.frequency[t], cfg);
      if (bin >= 0) H.at(static_cast<std::size_t>(bin), t) += attrs.amplitude[t];
    }
  }
  return H;
}

MarginalSpectrum marginal_spectrum(const HilbertSpectrum& H) {
  MarginalSpectrum m;
  m.bin_edges = H.bin_edges;
  m.values.assign(H.n_bins, 0.0);
  for (std::size_t b = 0; b < H.n_bins; ++b) {
    double s = 0.0;
    for (std::size_t t = 0; t < H.n_samples; ++t) s += H.at(b, t);
    m.values[b] = s;
  }
  return m;
}

HoloSpectrum holo_spectrum(const Signal& x, const SpectrumConfig& carrier_cfg,
                           const SpectrumConfig& am_cfg, const emd::SiftConfig& sift) {
  check_config(carrier_cfg);
  check_config(am_cfg);
  if (x.samples.size() < 16) {
    throw std::invalid_argument("second-level sift failed: signal too short");
  }

  HoloSpectrum holo;
  holo.n_carrier = static_cast<std::size_t>(carrier_cfg.n_bins);
  holo.n_am = static_cast<std::size_t>(am_cfg.n_bins);
  holo.carrier_edges = make_bin_edges(carrier_cfg);
  holo.am_edges = make_bin_edges(am_cfg);
  holo.grid.assign(holo.n_carrier * holo.n_am, 0.0);

  const auto first_level = emd::decompose(x, sift);
  for (const auto& imf : first_level.imfs) {
    const auto attrs = instantaneous_attributes(imf, x.fs);

    // Second-level sift: decompose the amplitude envelope. An envelope with
    // too few oscillations simply contributes nothing.
    const auto second_level = emd::decompose(Signal{attrs.amplitude, x.fs}, sift);
    for (const auto& am_imf : second_level.imfs) {
      const auto am_attrs = instantaneous_attributes(am_imf, x.fs);
      for (std::size_t t = 0; t < am_attrs.amplitude.size(); ++t) {
        const int cbin = bin_index(attrs.frequency[t], carrier_cfg);
        if (cbin < 0) continue;
        const int abin = bin_index(am_attrs.frequency[t], am_cfg);
        if (abin < 0) continue;
        holo.at(static_cast<std::size_t>(cbin), static_cast<std::size_t>(abin)) +=
            am_attrs.amplitude[t];
      }
    }
  }
  return holo;
}

}  // namespace eeg::hht
