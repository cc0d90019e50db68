#include "eeg/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eeg/fft.hpp"
#include "eeg/kernels.hpp"

namespace eeg::feat {

namespace {

double mean_of(const std::vector<double>& v) {
  return kernels::sum(v) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

std::vector<double> first_difference(const std::vector<double>& v) {
  std::vector<double> d(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i + 1] - v[i];
  return d;
}

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count) {
  std::vector<std::size_t> sizes;
  if (hi < lo) return sizes;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const auto s = static_cast<std::size_t>(std::lround(std::exp(llo + f * (lhi - llo))));
    if (sizes.empty() || s > sizes.back()) sizes.push_back(s);
  }
  return sizes;
}

}  // namespace

std::vector<BandDefinition> default_bands() {
  return {{"theta", 4.0, 8.0},
          {"alpha_low", 8.0, 10.0},
          {"alpha_high", 10.0, 13.0},
          {"beta", 13.0, 25.0},
          {"gamma", 25.0, 40.0}};
}

double higuchi_fd(const Signal& x, int k_max, bool* degenerate) {
  const auto& v = x.samples;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  if (k_max < 2 || n <= 2 * k_max) throw std::invalid_argument("signal too short for Higuchi");
  if (degenerate != nullptr) *degenerate = false;

  std::vector<double> log_inv_k, log_len;
  for (int k = 1; k <= k_max; ++k) {
    double lk = 0.0;
    for (int m = 0; m < k; ++m) {
      const auto terms = (n - 1 - m) / k;
      if (terms < 1) continue;
      double length = 0.0;
      for (std::ptrdiff_t i = 1; i <= terms; ++i) {
        length += std::abs(v[static_cast<std::size_t>(m + i * k)] -
                           v[static_cast<std::size_t>(m + (i - 1) * k)]);
      }
      lk += length * static_cast<double>(n - 1) /
            (static_cast<double>(terms) * static_cast<double>(k) * static_cast<double>(k));
    }
    lk /= static_cast<double>(k);
    if (lk <= 0.0) {
      // zero curve length: flat signal
      if (degenerate != nullptr) *degenerate = true;
      return 1.0;
    }
    log_inv_k.push_back(std::log(1.0 / static_cast<double>(k)));
    log_len.push_back(std::log(lk));
  }
  return regression_slope(log_inv_k, log_len);
}

double petrosian_fd(const Signal& x) {
  const auto& v = x.samples;
  if (v.size() < 3) throw std::invalid_argument("signal too short for Petrosian");
  const auto d = first_difference(v);
  std::size_t n_delta = 0;
  int last = 0;
  for (double t : d) {
    const int s = (t > 0.0) - (t < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++n_delta;
    last = s;
  }
  const double n = static_cast<double>(v.size());
  return std::log10(n) /
         (std::log10(n) + std::log10(n / (n + 0.4 * static_cast<double>(n_delta))));
}

HjorthParams hjorth(const Signal& x) {
  const auto& v = x.samples;
  if (v.size() < 3) throw std::invalid_argument("signal too short for Hjorth");
  const double var0 = variance_of(v);
  if (var0 <= 0.0) throw std::invalid_argument("constant signal");
  const auto d1 = first_difference(v);
  const auto d2 = first_difference(d1);
  const double var1 = variance_of(d1);
  const double var2 = variance_of(d2);
  const double mob = std::sqrt(var1 / var0);
  const double mob_d = var1 > 0.0 ? std::sqrt(var2 / var1) : 0.0;
  return {mob, mob > 0.0 ? mob_d / mob : 0.0};
}

double dfa(const Signal& x, std::vector<std::size_t> box_sizes) {
  const auto& v = x.samples;
  const std::size_t n = v.size();
  if (box_sizes.empty()) box_sizes = log_spaced_sizes(4, n / 4, 10);
  if (n < 16) throw std::invalid_argument("signal too short for DFA");

  // integrated mean-removed profile
  const double m = mean_of(v);
  std::vector<double> profile(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += v[i] - m;
    profile[i] = acc;
  }

  std::vector<double> log_s, log_f;
  for (std::size_t s : box_sizes) {
    if (s < 4 || s > n / 4) continue;
    const std::size_t boxes = n / s;
    double ssq = 0.0;
    for (std::size_t b = 0; b < boxes; ++b) {
      // linear detrend within the box
      const std::size_t off = b * s;
      double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        const double xi = static_cast<double>(i);
        sx += xi;
        sy += profile[off + i];
        sxx += xi * xi;
        sxy += xi * profile[off + i];
      }
      const double denom = static_cast<double>(s) * sxx - sx * sx;
      const double slope = (static_cast<double>(s) * sxy - sx * sy) / denom;
      const double icpt = (sy - slope * sx) / static_cast<double>(s);
      for (std::size_t i = 0; i < s; ++i) {
        const double r = profile[off + i] - (icpt + slope * static_cast<double>(i));
        ssq += r * r;
      }
    }
    const double f = std::sqrt(ssq / static_cast<double>(boxes * s));
    if (f <= 0.0) throw std::invalid_argument("zero fluctuation");
    log_s.push_back(std::log(static_cast<double>(s)));
    log_f.push_back(std::log(f));
  }
  if (log_s.size() < 3) throw std::invalid_argument("fewer than 3 usable box sizes");
  return regression_slope(log_s, log_f);
}

double hurst(const Signal& x) {
  const auto& v = x.samples;
  const std::size_t n = v.size();
  if (n < 64) throw std::invalid_argument("signal too short for Hurst");

  const auto sizes = log_spaced_sizes(16, n / 2, 10);
  std::vector<double> log_n, log_rs;
  for (std::size_t s : sizes) {
    const std::size_t blocks = n / s;
    if (blocks == 0) continue;
    double rs_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t off = b * s;
      double mean = 0.0;
      for (std::size_t i = 0; i < s; ++i) mean += v[off + i];
      mean /= static_cast<double>(s);
      double acc = 0.0, lo = 0.0, hi = 0.0, var = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        const double dev = v[off + i] - mean;
        var += dev * dev;
        acc += dev;
        lo = std::min(lo, acc);
        hi = std::max(hi, acc);
      }
      const double sd = std::sqrt(var / static_cast<double>(s));
      if (sd <= 0.0) continue;  // flat block skipped
      rs_sum += (hi - lo) / sd;
      ++used;
    }
    if (used == 0) continue;
    log_n.push_back(std::log(static_cast<double>(s)));
    log_rs.push_back(std::log(rs_sum / static_cast<double>(used)));
  }
  if (log_n.size() < 3) throw std::invalid_argument("no usable subseries for Hurst");
  return regression_slope(log_n, log_rs);
}

std::vector<double> psd_band_powers(const Signal& x, const std::vector<BandDefinition>& bands,
                                    double window_s, double hop_s) {
  validate_signal(x);
  const double nyquist = x.fs / 2.0;
  for (const auto& b : bands) {
    if (!(b.lo < b.hi)) throw std::invalid_argument("band " + b.name + " has empty range");
    if (b.hi > nyquist + 1e-9) {
      throw std::invalid_argument("band " + b.name + " extends beyond Nyquist");
    }
  }

  const std::size_t n = x.samples.size();
  auto win = static_cast<std::size_t>(std::llround(window_s * x.fs));
  auto hop = static_cast<std::size_t>(std::llround(hop_s * x.fs));
  if (win == 0 || win > n) win = n;
  if (hop == 0) hop = win;

  // periodic Hann taper
  std::vector<double> taper(win);
  double wss = 0.0;
  for (std::size_t i = 0; i < win; ++i) {
    taper[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(win));
    wss += taper[i] * taper[i];
  }
  const double scale = 1.0 / (x.fs * wss);

  const std::size_t count = (n - win) / hop + 1;
  std::vector<double> psd(win / 2 + 1, 0.0);
  std::vector<double> seg(win);
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t off = w * hop;
    for (std::size_t i = 0; i < win; ++i) seg[i] = x.samples[off + i] * taper[i];
    const auto spec = fft::forward_real(seg);
    for (std::size_t k = 0; k < psd.size(); ++k) {
      double p = std::norm(spec[k]) * scale;
      if (k != 0 && !(win % 2 == 0 && k == win / 2)) p *= 2.0;  // one-sided
      psd[k] += p;
    }
  }
  for (double& p : psd) p /= static_cast<double>(count);

  const double df = x.fs / static_cast<double>(win);
  std::vector<double> powers(bands.size(), 0.0);
  for (std::size_t k = 0; k < psd.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (f >= bands[b].lo && f < bands[b].hi) powers[b] += psd[k];
    }
  }
  return powers;
}

SpectralSummary rir_and_spectral_entropy(const std::vector<double>& psi) {
  if (psi.empty()) throw std::invalid_argument("no bands");
  const double total = kernels::sum(psi);
  if (total <= 0.0) throw std::invalid_argument("no in-band power");

  SpectralSummary out;
  out.rir.resize(psi.size());
  double h = 0.0;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    out.rir[b] = psi[b] / total;
    if (out.rir[b] > 0.0) h -= out.rir[b] * std::log(out.rir[b]);
  }
  out.spectral_entropy = psi.size() > 1 ? h / std::log(static_cast<double>(psi.size())) : 0.0;
  return out;
}

ImfFeatureVector imf_features(const emd::Imf& imf, const hht::InstantaneousAttributes& attrs) {
  const std::size_t n = imf.samples.size();
  if (attrs.amplitude.size() != n || attrs.frequency.size() != n) {
    throw std::invalid_argument("attributes do not match mode length");
  }
  ImfFeatureVector out;
  out.energy = kernels::sum_sq(imf.samples);
  if (out.energy <= 0.0) return out;  // zero-energy mode: all features zero

  // ITED(t) = a(t)^2 as a density over time
  std::vector<double> ited(n);
  for (std::size_t i = 0; i < n; ++i) ited[i] = attrs.amplitude[i] * attrs.amplitude[i];
  const double mass = kernels::sum(ited);
  const double dt = 1.0 / attrs.fs;
  if (mass > 0.0) {
    double mean_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_t += ited[i] * static_cast<double>(i) * dt;
    mean_t /= mass;
    double var_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(i) * dt - mean_t;
      var_t += ited[i] * d * d;
    }
    out.sp_ited = std::sqrt(var_t / mass);
  }
  const double ited_mean = mass / static_cast<double>(n);
  double mad = 0.0;
  for (double v : ited) mad += std::abs(v - ited_mean);
  out.d_ited = mad / static_cast<double>(n);

  out.sp_omega = std::sqrt(variance_of(attrs.frequency));

  // ISED: a^2 histogram over instantaneous frequency, 64 bins on [0, fs/2]
  constexpr std::size_t kIsedBins = 64;
  std::vector<double> ised(kIsedBins, 0.0);
  const double width = attrs.fs / 2.0 / static_cast<double>(kIsedBins);
  for (std::size_t i = 0; i < n; ++i) {
    auto b = static_cast<std::size_t>(attrs.frequency[i] / width);
    if (b >= kIsedBins) b = kIsedBins - 1;
    ised[b] += ited[i];
  }
  if (mass > 0.0) {
    for (double& v : ised) v /= mass * width;  // normalize to a density
  }
  const double ised_mean = kernels::sum(ised) / static_cast<double>(kIsedBins);
  double mad_ised = 0.0;
  for (double v : ised) mad_ised += std::abs(v - ised_mean);
  out.d_ised = mad_ised / static_cast<double>(kIsedBins);
  return out;
}

}  // namespace eeg::feat
