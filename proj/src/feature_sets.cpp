#include "eeg/feature_sets.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "eeg/parallel.hpp"
#include "eeg/signal.hpp"
#include "eeg/wavelet.hpp"

namespace eeg::pipe {

SetId parse_set_id(const std::string& name) {
  if (name == "A" || name == "set_A") return SetId::A;
  if (name == "B" || name == "set_B") return SetId::B;
  if (name == "C" || name == "set_C") return SetId::C;
  if (name == "D" || name == "set_D") return SetId::D;
  if (name == "MHS" || name == "mhs") return SetId::MHS;
  if (name == "HHSA" || name == "hhsa") return SetId::HHSA;
  throw std::invalid_argument("unknown feature set: " + name);
}

std::string set_name(SetId id) {
  switch (id) {
    case SetId::A: return "A";
    case SetId::B: return "B";
    case SetId::C: return "C";
    case SetId::D: return "D";
    case SetId::MHS: return "MHS";
    case SetId::HHSA: return "HHSA";
  }
  return "?";
}

FeatureSetSpec default_spec(SetId id, Dimension dimension) {
  FeatureSetSpec spec;
  spec.id = id;
  switch (id) {
    case SetId::A:
      spec.features = {"hjorth_mobility", "hjorth_complexity", "higuchi_fd",
                       "petrosian_fd",    "spectral_entropy",  "psi",
                       "rir"};
      spec.bands = {"alpha_low", "alpha_high", "beta", "gamma"};
      break;
    case SetId::B:
      spec.features = {"psd"};
      spec.bands = {"alpha_high", "beta"};
      break;
    case SetId::C:
      spec.features = {"dwt_energy", "dwt_entropy"};
      spec.bands = dimension == Dimension::valence
                       ? std::vector<std::string>{"gamma"}
                       : std::vector<std::string>{"theta", "alpha", "beta", "gamma"};
      break;
    case SetId::D:
      if (dimension == Dimension::valence) {
        spec.features = {"sp_ited", "d_ised"};
        spec.n_imfs = 4;
      } else {
        spec.features = {"imf_energy", "sp_omega", "d_ised"};
        spec.n_imfs = 3;
      }
      break;
    case SetId::MHS:
      spec.n_imfs = 4;
      break;
    case SetId::HHSA:
      spec.n_imfs = 4;
      break;
  }
  return spec;
}

namespace {

const std::vector<std::string> kChannelLevelFeatures = {
    "hjorth_mobility", "hjorth_complexity", "higuchi_fd", "petrosian_fd",
    "spectral_entropy", "dfa", "hurst"};
const std::vector<std::string> kBandLevelFeatures = {"psi", "rir"};

bool is_band_level(const std::string& f) {
  return std::find(kBandLevelFeatures.begin(), kBandLevelFeatures.end(), f) !=
         kBandLevelFeatures.end();
}

// Column names for one channel, without the trailing @channel tag.
std::vector<std::string> column_stems(const FeatureSetSpec& spec) {
  std::vector<std::string> stems;
  char buf[48];
  switch (spec.id) {
    case SetId::A:
      for (const auto& f : spec.features) {
        if (is_band_level(f)) {
          for (const auto& b : spec.bands) stems.push_back(f + "@" + b);
        } else {
          stems.push_back(f + "@-");
        }
      }
      break;
    case SetId::B:
      for (const auto& b : spec.bands) stems.push_back("psd@" + b);
      break;
    case SetId::C:
      for (const auto& f : spec.features) {
        for (const auto& b : spec.bands) stems.push_back(f + "@" + b);
      }
      break;
    case SetId::D:
      for (int k = 1; k <= spec.n_imfs; ++k) {
        for (const auto& f : spec.features) {
          std::snprintf(buf, sizeof(buf), "%s@imf%d", f.c_str(), k);
          stems.emplace_back(buf);
        }
      }
      break;
    case SetId::MHS:
      for (int k = 1; k <= spec.n_imfs; ++k) {
        for (int b = 0; b < spec.mhs_cfg.n_bins; ++b) {
          std::snprintf(buf, sizeof(buf), "mhs_b%02d@imf%d", b, k);
          stems.emplace_back(buf);
        }
      }
      break;
    case SetId::HHSA:
      for (int c = 0; c < spec.hhsa_carrier_cfg.n_bins; ++c) {
        for (int a = 0; a < spec.hhsa_am_cfg.n_bins; ++a) {
          std::snprintf(buf, sizeof(buf), "hhsa_c%d_a%d@-", c, a);
          stems.emplace_back(buf);
        }
      }
      break;
  }
  return stems;
}

const feat::BandDefinition& band_by_name(const std::vector<feat::BandDefinition>& bands,
                                         const std::string& name) {
  for (const auto& b : bands) {
    if (b.name == name) return b;
  }
  throw std::invalid_argument("unknown band: " + name);
}

std::size_t dwt_band_index(const std::string& name) {
  // index into wavelet::band_features output
  if (name == "theta") return 0;
  if (name == "alpha") return 1;
  if (name == "beta") return 2;
  if (name == "gamma") return 3;
  throw std::invalid_argument("unknown DWT band: " + name);
}

double channel_level_feature(const std::string& f, const Signal& x,
                             const feat::SpectralSummary& spectral) {
  if (f == "hjorth_mobility") return feat::hjorth(x).mobility;
  if (f == "hjorth_complexity") return feat::hjorth(x).complexity;
  if (f == "higuchi_fd") return feat::higuchi_fd(x);
  if (f == "petrosian_fd") return feat::petrosian_fd(x);
  if (f == "spectral_entropy") return spectral.spectral_entropy;
  if (f == "dfa") return feat::dfa(x);
  if (f == "hurst") return feat::hurst(x);
  throw std::invalid_argument("unknown channel-level feature: " + f);
}

void extract_set_a(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                   double* out) {
  std::vector<feat::BandDefinition> bands;
  for (const auto& name : spec.bands) bands.push_back(band_by_name(params.bands, name));
  const auto psi = feat::psd_band_powers(x, bands, params.window_s, params.hop_s);
  const auto spectral = feat::rir_and_spectral_entropy(psi);

  std::size_t at = 0;
  for (const auto& f : spec.features) {
    if (f == "psi") {
      for (double p : psi) out[at++] = p;
    } else if (f == "rir") {
      for (double r : spectral.rir) out[at++] = r;
    } else {
      out[at++] = channel_level_feature(f, x, spectral);
    }
  }
}

void extract_set_b(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                   double* out) {
  std::vector<feat::BandDefinition> bands;
  for (const auto& name : spec.bands) bands.push_back(band_by_name(params.bands, name));

  // frame-level band power, averaged to the trial level
  const auto windows = segment_windows(x, params.window_s, params.hop_s);
  std::vector<double> mean(bands.size(), 0.0);
  for (const auto& w : windows) {
    const auto p = feat::psd_band_powers(w, bands, params.window_s, params.hop_s);
    for (std::size_t b = 0; b < bands.size(); ++b) mean[b] += p[b];
  }
  for (std::size_t b = 0; b < bands.size(); ++b) {
    out[b] = mean[b] / static_cast<double>(windows.size());
  }
}

void extract_set_c(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                   double* out) {
  std::vector<std::size_t> band_idx;
  for (const auto& name : spec.bands) band_idx.push_back(dwt_band_index(name));

  const auto windows = segment_windows(x, params.window_s, params.hop_s);
  const std::size_t stride = band_idx.size();
  std::vector<double> mean(spec.features.size() * stride, 0.0);
  for (const auto& w : windows) {
    const auto bands = wavelet::band_features(wavelet::dwt_decompose(w));
    for (std::size_t fi = 0; fi < spec.features.size(); ++fi) {
      const bool energy = spec.features[fi] == "dwt_energy";
      for (std::size_t bi = 0; bi < stride; ++bi) {
        const auto& bf = bands[band_idx[bi]];
        mean[fi * stride + bi] += energy ? bf.energy : bf.entropy;
      }
    }
  }
  for (std::size_t i = 0; i < mean.size(); ++i) {
    out[i] = mean[i] / static_cast<double>(windows.size());
  }
}

double imf_feature_value(const std::string& f, const feat::ImfFeatureVector& v) {
  if (f == "imf_energy") return v.energy;
  if (f == "sp_ited") return v.sp_ited;
  if (f == "d_ited") return v.d_ited;
  if (f == "sp_omega") return v.sp_omega;
  if (f == "d_ised") return v.d_ised;
  throw std::invalid_argument("unknown per-mode feature: " + f);
}

void extract_set_d(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                   double* out, bool& short_flag) {
  const auto dec = emd::decompose(x, params.sift);
  const std::size_t per_imf = spec.features.size();
  for (int k = 0; k < spec.n_imfs; ++k) {
    if (static_cast<std::size_t>(k) < dec.imfs.size()) {
      const auto& imf = dec.imfs[static_cast<std::size_t>(k)];
      const auto attrs = hht::instantaneous_attributes(imf, x.fs);
      const auto v = feat::imf_features(imf, attrs);
      for (std::size_t fi = 0; fi < per_imf; ++fi) {
        out[static_cast<std::size_t>(k) * per_imf + fi] = imf_feature_value(spec.features[fi], v);
      }
    } else {
      short_flag = true;
      for (std::size_t fi = 0; fi < per_imf; ++fi) {
        out[static_cast<std::size_t>(k) * per_imf + fi] = 0.0;
      }
    }
  }
}

void extract_mhs(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                 double* out, bool& short_flag) {
  const auto dec = emd::decompose(x, params.sift);
  const auto bins = static_cast<std::size_t>(spec.mhs_cfg.n_bins);
  for (int k = 0; k < spec.n_imfs; ++k) {
    double* slot = out + static_cast<std::size_t>(k) * bins;
    if (static_cast<std::size_t>(k) < dec.imfs.size()) {
      const auto H = hht::hilbert_spectrum({dec.imfs[static_cast<std::size_t>(k)]}, x.fs,
                                           spec.mhs_cfg);
      const auto marginal = hht::marginal_spectrum(H);
      std::copy(marginal.values.begin(), marginal.values.end(), slot);
    } else {
      short_flag = true;
      std::fill(slot, slot + bins, 0.0);
    }
  }
}

void extract_hhsa(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                  double* out) {
  emd::SiftConfig sift = params.sift;
  sift.max_imfs = spec.n_imfs;
  const auto holo = hht::holo_spectrum(x, spec.hhsa_carrier_cfg, spec.hhsa_am_cfg, sift);
  std::copy(holo.grid.begin(), holo.grid.end(), out);
}

void extract_channel(const FeatureSetSpec& spec, const ExtractionParams& params, const Signal& x,
                     double* out, bool& short_flag) {
  switch (spec.id) {
    case SetId::A: extract_set_a(spec, params, x, out); break;
    case SetId::B: extract_set_b(spec, params, x, out); break;
    case SetId::C: extract_set_c(spec, params, x, out); break;
    case SetId::D: extract_set_d(spec, params, x, out, short_flag); break;
    case SetId::MHS: extract_mhs(spec, params, x, out, short_flag); break;
    case SetId::HHSA: extract_hhsa(spec, params, x, out); break;
  }
}

}  // namespace

FeatureMatrix build_feature_set(const std::vector<Trial>& trials, const FeatureSetSpec& spec,
                                const ExtractionParams& params, int threads) {
  if (trials.empty()) throw std::invalid_argument("no trials");

  // resolve the channel subset against the first trial's montage
  const auto& montage = trials.front().channel_names;
  std::vector<std::size_t> channel_idx;
  std::vector<std::string> channel_tags;
  if (spec.channels.empty()) {
    for (std::size_t c = 0; c < montage.size(); ++c) channel_idx.push_back(c);
    channel_tags = montage;
  } else {
    for (const auto& name : spec.channels) {
      const auto it = std::find(montage.begin(), montage.end(), name);
      if (it == montage.end()) throw std::invalid_argument("unknown channel name: " + name);
      channel_idx.push_back(static_cast<std::size_t>(it - montage.begin()));
      channel_tags.push_back(name);
    }
  }

  const auto stems = column_stems(spec);
  const std::size_t per_channel = stems.size();

  FeatureMatrix m;
  m.values.rows = trials.size();
  m.values.cols = per_channel * channel_idx.size();
  m.values.data.assign(m.values.rows * m.values.cols, 0.0);
  m.column_names.reserve(m.values.cols);
  for (const auto& tag : channel_tags) {
    for (const auto& stem : stems) m.column_names.push_back(stem + "@" + tag);
  }
  m.trial_ids.reserve(trials.size());
  for (const auto& t : trials) m.trial_ids.push_back(t.key());

  std::vector<char> short_flags(trials.size(), 0);
  const std::size_t n_tasks = trials.size() * channel_idx.size();
  parallel_for(n_tasks, threads, [&](std::size_t task) {
    const std::size_t trial = task / channel_idx.size();
    const std::size_t ch = task % channel_idx.size();
    const Signal x{trials[trial].channels[channel_idx[ch]], trials[trial].fs};
    double* out = m.values.row(trial) + ch * per_channel;
    bool short_flag = false;
    extract_channel(spec, params, x, out, short_flag);
    if (short_flag) short_flags[trial] = 1;
  });
  for (char f : short_flags) m.quality_flags += f;
  return m;
}

std::string column_channel(const std::string& column_name) {
  const auto pos = column_name.rfind('@');
  if (pos == std::string::npos) throw std::invalid_argument("malformed column: " + column_name);
  return column_name.substr(pos + 1);
}

FeatureMatrix reduce_channels(const FeatureMatrix& m, const std::vector<std::string>& channels) {
  if (channels.empty()) throw std::invalid_argument("empty channel selection");

  std::vector<std::string> present;
  for (const auto& name : m.column_names) present.push_back(column_channel(name));
  for (const auto& want : channels) {
    if (std::find(present.begin(), present.end(), want) == present.end()) {
      throw std::invalid_argument("unknown channel name: " + want);
    }
  }

  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < m.column_names.size(); ++c) {
    if (std::find(channels.begin(), channels.end(), present[c]) != channels.end()) {
      keep.push_back(c);
    }
  }

  FeatureMatrix out;
  out.trial_ids = m.trial_ids;
  out.quality_flags = m.quality_flags;
  out.values.rows = m.values.rows;
  out.values.cols = keep.size();
  out.values.data.resize(out.values.rows * out.values.cols);
  out.column_names.reserve(keep.size());
  for (auto c : keep) out.column_names.push_back(m.column_names[c]);
  for (std::size_t r = 0; r < m.values.rows; ++r) {
    for (std::size_t i = 0; i < keep.size(); ++i) {
      out.values.data[r * keep.size() + i] = m.values.at(r, keep[i]);
    }
  }
  return out;
}

}  // namespace eeg::pipe
