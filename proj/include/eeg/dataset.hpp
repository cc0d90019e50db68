#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// DEAP-shaped trials and their on-disk interchange format: one .trial file
// per trial holding a single-line JSON header (subject_id, trial_id, fs,
// channel names, ratings) followed by a little-endian row-major 32x7680
// float64 block.

namespace eeg::pipe {

inline constexpr std::size_t kNumChannels = 32;
inline constexpr double kSampleRate = 128.0;
inline constexpr std::size_t kTrialSamples = 7680;  // 60 s

struct Trial {
  int subject_id = 0;
  int trial_id = 0;
  double fs = kSampleRate;
  std::vector<std::string> channel_names;
  std::vector<std::vector<double>> channels;  // kNumChannels x kTrialSamples
  double valence = 5.0;  // self-assessment ratings in [1, 9]
  double arousal = 5.0;

  std::string key() const;  // "s01_t03"
};

// 32-channel EEG montage in DEAP order.
const std::vector<std::string>& deap_channel_names();

// Default 10-channel frontal subset (overridable in config).
const std::vector<std::string>& default_frontal_channels();

enum class Dimension { valence, arousal };

struct LabelConfig {
  double threshold = 4.5;
  Dimension dimension = Dimension::valence;
};

// 1 (high) iff rating > threshold.
int binarize(double rating, const LabelConfig& cfg);

std::vector<int> labels_for(const std::vector<Trial>& trials, const LabelConfig& cfg);

void save_trial(const Trial& trial, const std::filesystem::path& file);
void save_dataset(const std::vector<Trial>& trials, const std::filesystem::path& dir);

// Loads and validates every *.trial file under dir; any malformed file
// aborts the load with a diagnostic naming the file. Trials are ordered by
// (subject_id, trial_id).
std::vector<Trial> load_dataset(const std::filesystem::path& dir);

// Synthetic generator: band-limited background noise plus an
// amplitude-modulated tone per channel, with a class-dependent power boost
// in the named band. The boosted band's power ratio between the high and
// low class is 1 + effect, so effect 0 produces a null dataset. Ratings are
// drawn on the matching side of the 4.5 threshold and both classes always
// occur. Deterministic given the seed.
struct SeparationSpec {
  std::string band = "gamma";
  double effect = 2.0;
};

std::vector<Trial> synth_dataset(std::uint64_t seed, int n_subjects, int n_trials_per_subject,
                                 const SeparationSpec& spec);

}  // namespace eeg::pipe
