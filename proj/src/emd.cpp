#include "eeg/emd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eeg/kernels.hpp"

namespace eeg::emd {

namespace {

// Tridiagonal (Thomas) solve for natural-spline second derivatives.
std::vector<double> spline_second_derivatives(const std::vector<double>& xs,
                                              const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;

  std::vector<double> diag(n), rhs(n), upper(n);
  diag[0] = diag[n - 1] = 1.0;
  rhs[0] = rhs[n - 1] = 0.0;
  upper[0] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = xs[i] - xs[i - 1];
    const double hr = xs[i + 1] - xs[i];
    diag[i] = 2.0 * (hl + hr);
    upper[i] = hr;
    rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl);
  }
  // forward elimination; the lower entry of row i is (x_i - x_{i-1}) except
  // at the natural boundary rows where it is zero
  for (std::size_t i = 1; i < n; ++i) {
    const double lower = (i + 1 < n) ? (xs[i] - xs[i - 1]) : 0.0;
    if (lower != 0.0) {
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  }
  m[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
  }
  return m;
}

}  // namespace

std::vector<double> natural_spline_at_indices(const std::vector<double>& xs,
                                              const std::vector<double>& ys,
                                              std::size_t n) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw std::invalid_argument("spline needs at least two knots");
  }
  const auto m = spline_second_derivatives(xs, ys);
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double q = static_cast<double>(t);
    while (seg + 2 < xs.size() && xs[seg + 1] <= q) ++seg;
    const double h = xs[seg + 1] - xs[seg];
    const double a = (xs[seg + 1] - q) / h;
    const double b = (q - xs[seg]) / h;
    out[t] = a * ys[seg] + b * ys[seg + 1] +
             ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * h * h / 6.0;
  }
  return out;
}

namespace {

// Spline knots for one envelope: the extrema plus the two nearest extrema
// reflected about each endpoint.
void mirrored_knots(const std::vector<std::size_t>& idx, const std::vector<double>& v,
                    std::size_t n, std::vector<double>& xs, std::vector<double>& ys) {
  const double last = static_cast<double>(n - 1);
  xs.clear();
  ys.clear();
  xs.reserve(idx.size() + 4);
  ys.reserve(idx.size() + 4);
  xs.push_back(-static_cast<double>(idx[1]));
  ys.push_back(v[idx[1]]);
  xs.push_back(-static_cast<double>(idx[0]));
  ys.push_back(v[idx[0]]);
  for (std::size_t i : idx) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(v[i]);
  }
  const std::size_t k = idx.size();
  xs.push_back(2.0 * last - static_cast<double>(idx[k - 1]));
  ys.push_back(v[idx[k - 1]]);
  xs.push_back(2.0 * last - static_cast<double>(idx[k - 2]));
  ys.push_back(v[idx[k - 2]]);
}

}  // namespace

std::vector<double> envelope_mean(const Signal& x, const ExtremaIndex& extrema) {
  if (extrema.maxima.size() < 2 || extrema.minima.size() < 2) {
    throw std::invalid_argument("insufficient extrema");
  }
  const std::size_t n = x.samples.size();
  std::vector<double> xs, ys;

  mirrored_knots(extrema.maxima, x.samples, n, xs, ys);
  auto upper = natural_spline_at_indices(xs, ys, n);
  mirrored_knots(extrema.minima, x.samples, n, xs, ys);
  auto lower = natural_spline_at_indices(xs, ys, n);

  for (std::size_t i = 0; i < n; ++i) upper[i] = 0.5 * (upper[i] + lower[i]);
  return upper;
}

std::size_t count_zero_crossings(const std::vector<double>& v) {
  std::size_t count = 0;
  int last = 0;
  for (double s : v) {
    const int sign = (s > 0.0) - (s < 0.0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++count;
    last = sign;
  }
  return count;
}

bool imf_condition1(const std::vector<double>& v) {
  const Signal s{v, 1.0};
  const auto ext = find_extrema(s);
  const auto ne = ext.maxima.size() + ext.minima.size();
  const auto nz = count_zero_crossings(v);
  return (ne > nz ? ne - nz : nz - ne) <= 1;
}

double envelope_mean_rms_ratio(const std::vector<double>& v, double fs) {
  const Signal s{v, fs};
  const auto ext = find_extrema(s);
  if (ext.maxima.size() < 2 || ext.minima.size() < 2) return 0.0;
  const auto mean = envelope_mean(s, ext);
  const double num = kernels::sum_sq(mean);
  const double den = kernels::sum_sq(v);
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

Imf sift_imf(const Signal& x, const SiftConfig& cfg) {
  validate_signal(x);
  const auto ext0 = find_extrema(x);
  if (ext0.maxima.size() < 2 || ext0.minima.size() < 2) {
    throw std::invalid_argument("insufficient extrema");
  }

  std::vector<double> h = x.samples;
  std::vector<double> mean = envelope_mean(x, ext0);
  std::vector<double> next(h.size());

  for (int it = 0; it < cfg.max_sift_iterations; ++it) {
    // SD of the upcoming subtraction: sum((h - h_new)^2)/sum(h^2) = sum(mean^2)/sum(h^2)
    const double den = kernels::sum_sq(h);
    const double sd = den > 0.0 ? kernels::sum_sq(mean) / den : 0.0;

    kernels::sub(h, mean, next);
    h.swap(next);

    const Signal hs{h, x.fs};
    ExtremaIndex ext;
    try {
      ext = find_extrema(hs);
    } catch (const std::invalid_argument&) {
      break;
    }
    if (ext.maxima.size() < 2 || ext.minima.size() < 2) break;  // sifted flat
    mean = envelope_mean(hs, ext);

    if (sd < cfg.sd_threshold && imf_condition1(h)) {
      const double hr = kernels::sum_sq(h);
      const double mr = kernels::sum_sq(mean);
      if (hr == 0.0 || mr <= cfg.envelope_tolerance * cfg.envelope_tolerance * hr) break;
    }
  }
  return Imf{std::move(h), 0};
}

ImfDecomposition decompose(const Signal& x, const SiftConfig& cfg) {
  validate_signal(x);
  ImfDecomposition dec;
  dec.source_length = x.samples.size();
  dec.residue = x.samples;

  while (static_cast<int>(dec.imfs.size()) < cfg.max_imfs) {
    const Signal res{dec.residue, x.fs};
    ExtremaIndex ext;
    try {
      ext = find_extrema(res);
    } catch (const std::invalid_argument&) {
      break;
    }
    if (ext.maxima.size() < 2 || ext.minima.size() < 2) break;

    Imf imf = sift_imf(res, cfg);
    imf.index = static_cast<int>(dec.imfs.size()) + 1;
    for (std::size_t i = 0; i < dec.residue.size(); ++i) dec.residue[i] -= imf.samples[i];
    dec.imfs.push_back(std::move(imf));
  }
  return dec;
}

}  // namespace eeg::emd
