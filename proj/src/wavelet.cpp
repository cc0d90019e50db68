#include "eeg/wavelet.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace eeg::wavelet {

namespace {

// db4 reconstruction low-pass, from spectral factorization of the
// degree-3 Daubechies polynomial; sum = sqrt(2), sum of squares = 1 to
// machine precision.
constexpr std::array<double, 8> kRecLo = {
    0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
    -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
    0.032883011666885199735, -0.010597401785069032105};

constexpr std::size_t kTaps = kRecLo.size();

struct Filters {
  std::array<double, kTaps> rec_lo{}, rec_hi{}, dec_lo{}, dec_hi{};
  Filters() {
    for (std::size_t k = 0; k < kTaps; ++k) {
      rec_lo[k] = kRecLo[k];
      rec_hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * kRecLo[kTaps - 1 - k];
      dec_lo[k] = kRecLo[kTaps - 1 - k];
    }
    for (std::size_t k = 0; k < kTaps; ++k) dec_hi[k] = rec_hi[kTaps - 1 - k];
  }
};

const Filters& filters() {
  static const Filters f;
  return f;
}

// Half-sample symmetric extension, reflected repeatedly for short inputs.
inline std::size_t sym_index(std::ptrdiff_t m, std::size_t n) {
  const auto nn = static_cast<std::ptrdiff_t>(n);
  while (m < 0 || m >= nn) {
    if (m < 0) m = -m - 1;
    else m = 2 * nn - 1 - m;
  }
  return static_cast<std::size_t>(m);
}

void convolve_down(std::span<const double> x, const std::array<double, kTaps>& f,
                   std::vector<double>& out) {
  const std::size_t n = x.size();
  const std::size_t out_len = (n + kTaps - 1) / 2;
  out.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    double s = 0.0;
    const auto base = static_cast<std::ptrdiff_t>(2 * i + 1);
    for (std::size_t k = 0; k < kTaps; ++k) {
      s += f[k] * x[sym_index(base - static_cast<std::ptrdiff_t>(k), n)];
    }
    out[i] = s;
  }
}

}  // namespace

void dwt_step(std::span<const double> x, std::vector<double>& approx,
              std::vector<double>& detail) {
  convolve_down(x, filters().dec_lo, approx);
  convolve_down(x, filters().dec_hi, detail);
}

std::vector<double> idwt_step(const std::vector<double>& approx,
                              const std::vector<double>& detail, std::size_t n) {
  const std::size_t m = approx.size();
  if (detail.size() != m) throw std::invalid_argument("coefficient length mismatch");
  const std::size_t full = 2 * m + 2 - kTaps;
  if (n > full) throw std::invalid_argument("reconstruction target too long");
  const auto& f = filters();

  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    // contributions from coefficients i with 0 <= t + kTaps - 2 - 2i < kTaps,
    // i.e. i in [t/2, (t + kTaps - 2)/2]
    const auto upper = static_cast<std::ptrdiff_t>(t + kTaps - 2);
    double s = 0.0;
    for (auto i = static_cast<std::ptrdiff_t>(t / 2); i <= upper / 2; ++i) {
      if (i >= static_cast<std::ptrdiff_t>(m)) break;
      const auto j = static_cast<std::size_t>(upper - 2 * i);
      s += approx[static_cast<std::size_t>(i)] * f.rec_lo[j] +
           detail[static_cast<std::size_t>(i)] * f.rec_hi[j];
    }
    out[t] = s;
  }
  return out;
}

WaveletDecomposition dwt_decompose(const Signal& x, int levels) {
  validate_signal(x);
  if (levels < 2) throw std::invalid_argument("need at least 2 levels");
  const std::size_t min_len = kTaps << (levels - 1);
  if (x.samples.size() < min_len) {
    throw std::invalid_argument("signal too short for " + std::to_string(levels) +
                                "-level decomposition: need at least " +
                                std::to_string(min_len) + " samples");
  }

  WaveletDecomposition dec;
  dec.source_length = x.samples.size();
  dec.details.resize(static_cast<std::size_t>(levels));

  // D1 covers the beyond-Nyquist slot; zero by construction.
  std::vector<double> a = x.samples;
  dec.details[0].assign((a.size() + kTaps - 1) / 2, 0.0);

  std::vector<double> next_a, d;
  for (int lvl = 1; lvl < levels; ++lvl) {
    dec.stage_lengths.push_back(a.size());
    dwt_step(a, next_a, d);
    dec.details[static_cast<std::size_t>(lvl)] = std::move(d);
    a = std::move(next_a);
    d.clear();
  }
  dec.approximation = std::move(a);
  return dec;
}

std::vector<double> dwt_reconstruct(const WaveletDecomposition& dec) {
  std::vector<double> a = dec.approximation;
  const std::size_t stages = dec.stage_lengths.size();
  for (std::size_t s = stages; s-- > 0;) {
    a = idwt_step(a, dec.details[s + 1], dec.stage_lengths[s]);
  }
  return a;
}

double band_energy(std::span<const double> coeffs) {
  double e = 0.0;
  for (double c : coeffs) e += c * c;
  return e;
}

double band_entropy(std::span<const double> coeffs) {
  const double total = band_energy(coeffs);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : coeffs) {
    const double p = c * c / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<BandFeature> band_features(const WaveletDecomposition& dec) {
  if (dec.details.size() != 5) {
    throw std::invalid_argument("band features need a 5-level decomposition");
  }
  // D5 theta, D4 alpha, D3 beta, D2 gamma; D1 dropped.
  const std::array<std::pair<const char*, std::size_t>, 4> mapping = {{
      {"theta", 4}, {"alpha", 3}, {"beta", 2}, {"gamma", 1}}};
  std::vector<BandFeature> out;
  out.reserve(4);
  for (const auto& [name, idx] : mapping) {
    const auto& c = dec.details[idx];
    out.push_back(BandFeature{name, band_energy(c), band_entropy(c)});
  }
  return out;
}

}  // namespace eeg::wavelet
