#include "eeg/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "eeg/features.hpp"
#include "eeg/fft.hpp"
#include "eeg/rng.hpp"

namespace eeg::pipe {

using nlohmann::json;

std::string Trial::key() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%02d_t%02d", subject_id, trial_id);
  return buf;
}

const std::vector<std::string>& deap_channel_names() {
  static const std::vector<std::string> names = {
      "Fp1", "AF3", "F3",  "F7",  "FC5", "FC1", "C3",  "T7",  "CP5", "CP1", "P3",
      "P7",  "PO3", "O1",  "Oz",  "Pz",  "Fp2", "AF4", "Fz",  "F4",  "F8",  "FC6",
      "FC2", "Cz",  "C4",  "T8",  "CP6", "CP2", "P4",  "P8",  "PO4", "O2"};
  return names;
}

const std::vector<std::string>& default_frontal_channels() {
  static const std::vector<std::string> names = {"Fp1", "AF3", "F3", "F7",  "FC5",
                                                 "Fp2", "AF4", "F4", "F8", "FC6"};
  return names;
}

int binarize(double rating, const LabelConfig& cfg) {
  if (rating < 1.0 || rating > 9.0) throw std::invalid_argument("rating out of range");
  return rating > cfg.threshold ? 1 : 0;
}

std::vector<int> labels_for(const std::vector<Trial>& trials, const LabelConfig& cfg) {
  std::vector<int> labels(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const double rating =
        cfg.dimension == Dimension::valence ? trials[i].valence : trials[i].arousal;
    labels[i] = binarize(rating, cfg);
  }
  return labels;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "trial files are little-endian; big-endian hosts are unsupported");

void validate_trial(const Trial& t, const std::string& context) {
  if (t.channels.size() != kNumChannels || t.channel_names.size() != kNumChannels) {
    throw std::runtime_error(context + ": expected 32 channels");
  }
  if (t.fs != kSampleRate) throw std::runtime_error(context + ": expected fs=128");
  for (const auto& ch : t.channels) {
    if (ch.size() != kTrialSamples) {
      throw std::runtime_error(context + ": expected 7680 samples per channel");
    }
    for (double v : ch) {
      if (!std::isfinite(v)) throw std::runtime_error(context + ": non-finite sample");
    }
  }
  if (t.valence < 1.0 || t.valence > 9.0 || t.arousal < 1.0 || t.arousal > 9.0) {
    throw std::runtime_error(context + ": rating out of range");
  }
}

}  // namespace

void save_trial(const Trial& trial, const std::filesystem::path& file) {
  validate_trial(trial, file.string());
  json header;
  header["subject_id"] = trial.subject_id;
  header["trial_id"] = trial.trial_id;
  header["fs"] = trial.fs;
  header["channels"] = trial.channel_names;
  header["valence"] = trial.valence;
  header["arousal"] = trial.arousal;

  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << header.dump() << '\n';
  for (const auto& ch : trial.channels) {
    out.write(reinterpret_cast<const char*>(ch.data()),
              static_cast<std::streamsize>(ch.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

void save_dataset(const std::vector<Trial>& trials, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : trials) save_trial(t, dir / (t.key() + ".trial"));
}

namespace {

Trial load_trial(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error(file.string() + ": missing header line");
  }

  Trial t;
  try {
    const json header = json::parse(header_line);
    t.subject_id = header.at("subject_id").get<int>();
    t.trial_id = header.at("trial_id").get<int>();
    t.fs = header.at("fs").get<double>();
    t.channel_names = header.at("channels").get<std::vector<std::string>>();
    t.valence = header.at("valence").get<double>();
    t.arousal = header.at("arousal").get<double>();
  } catch (const json::exception& e) {
    throw std::runtime_error(file.string() + ": malformed header: " + e.what());
  }

  if (t.channel_names.size() != kNumChannels) {
    throw std::runtime_error(file.string() + ": expected 32 channels");
  }
  t.channels.assign(kNumChannels, std::vector<double>(kTrialSamples));
  for (auto& ch : t.channels) {
    in.read(reinterpret_cast<char*>(ch.data()),
            static_cast<std::streamsize>(kTrialSamples * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(kTrialSamples * sizeof(double))) {
      throw std::runtime_error(file.string() + ": truncated sample block");
    }
  }
  validate_trial(t, file.string());
  return t;
}

}  // namespace

std::vector<Trial> load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("dataset directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trial") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw std::runtime_error("no .trial files in " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<Trial> trials;
  trials.reserve(files.size());
  for (const auto& f : files) trials.push_back(load_trial(f));
  std::sort(trials.begin(), trials.end(), [](const Trial& a, const Trial& b) {
    return std::tie(a.subject_id, a.trial_id) < std::tie(b.subject_id, b.trial_id);
  });
  return trials;
}

namespace {

// Gaussian noise restricted to [lo, hi] Hz, built directly in the frequency
// domain; rms sets the output standard deviation.
std::vector<double> band_noise(Rng& rng, double lo, double hi, double rms) {
  const std::size_t n = kTrialSamples;
  std::vector<std::complex<double>> spec(n, {0.0, 0.0});
  const double df = kSampleRate / static_cast<double>(n);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < lo || f > hi) continue;
    const std::complex<double> c{rng.normal(), rng.normal()};
    spec[k] = c;
    spec[n - k] = std::conj(c);
  }
  auto samples = fft::inverse(spec);
  std::vector<double> out(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = samples[i].real();
    ss += out[i] * out[i];
  }
  const double current = std::sqrt(ss / static_cast<double>(n));
  if (current > 0.0) {
    const double g = rms / current;
    for (double& v : out) v *= g;
  }
  return out;
}

}  // namespace

std::vector<Trial> synth_dataset(std::uint64_t seed, int n_subjects, int n_trials_per_subject,
                                 const SeparationSpec& spec) {
  if (spec.effect < 0.0) throw std::invalid_argument("effect size must be non-negative");
  if (n_subjects < 1 || n_trials_per_subject < 1) {
    throw std::invalid_argument("need at least one subject and trial");
  }
  const auto bands = feat::default_bands();
  const auto band_it = std::find_if(bands.begin(), bands.end(),
                                    [&](const auto& b) { return b.name == spec.band; });
  if (band_it == bands.end()) throw std::invalid_argument("unknown band: " + spec.band);

  std::vector<Trial> trials;
  for (int s = 1; s <= n_subjects; ++s) {
    std::vector<int> classes(static_cast<std::size_t>(n_trials_per_subject));
    Rng class_rng(mix_seed(seed, 0xc1a55u, static_cast<std::uint64_t>(s)));
    for (auto& c : classes) c = static_cast<int>(class_rng.bounded(2));
    // both classes must occur
    if (std::count(classes.begin(), classes.end(), 0) == 0) classes.front() = 0;
    if (std::count(classes.begin(), classes.end(), 1) == 0) classes.front() = 1;

    for (int tr = 1; tr <= n_trials_per_subject; ++tr) {
      const int cls = classes[static_cast<std::size_t>(tr - 1)];
      const std::uint64_t trial_key =
          static_cast<std::uint64_t>(s) * 1000 + static_cast<std::uint64_t>(tr);

      Trial t;
      t.subject_id = s;
      t.trial_id = tr;
      t.channel_names = deap_channel_names();
      t.channels.resize(kNumChannels);

      Rng rating_rng(mix_seed(seed, 0x4a71e5u, trial_key));
      const double lo_rating = cls == 1 ? 4.6 : 1.0;
      const double hi_rating = cls == 1 ? 9.0 : 4.4;
      t.valence = rating_rng.uniform(lo_rating, hi_rating);
      t.arousal = rating_rng.uniform(lo_rating, hi_rating);

      for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
        Rng rng(mix_seed(seed, trial_key, ch));
        // broadband background over the preprocessed 4-45 Hz range
        auto samples = band_noise(rng, 4.0, 45.0, 10.0);

        // class-dependent extra power in the separation band:
        // high-class band power / low-class band power = 1 + effect
        if (cls == 1 && spec.effect > 0.0) {
          // the background contributes rms 10 * sqrt(band width / 41) in-band
          const double base_rms =
              10.0 * std::sqrt((band_it->hi - band_it->lo) / 41.0);
          const double boost_rms = base_rms * std::sqrt(spec.effect);
          const auto boost = band_noise(rng, band_it->lo, band_it->hi, boost_rms);
          for (std::size_t i = 0; i < samples.size(); ++i) samples[i] += boost[i];
        }

        // a mild AM tone so envelope analysis has structure to find
        const double carrier = 28.0 + 4.0 * rng.uniform();
        const double am = 5.0 + 2.0 * rng.uniform();
        const double depth = 0.5 + 0.4 * rng.uniform();
        const double amp = 3.0;
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const double time = static_cast<double>(i) / kSampleRate;
          samples[i] += amp *
                        (1.0 + depth * std::cos(2.0 * std::numbers::pi * am * time)) *
                        std::cos(2.0 * std::numbers::pi * carrier * time + phase);
        }
        t.channels[ch] = std::move(samples);
      }
      trials.push_back(std::move(t));
    }
  }
  return trials;
}

}  // namespace eeg::pipe
