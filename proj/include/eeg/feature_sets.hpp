#pragma once

#include <string>
#include <vector>

#include "eeg/dataset.hpp"
#include "eeg/emd.hpp"
#include "eeg/features.hpp"
#include "eeg/hilbert.hpp"
#include "eeg/learn.hpp"

// Assembly of the six feature sets. Columns are named
// <feature>@<band-or-imf>@<channel>; channel blocks are contiguous so a
// channel subset is a column filter.
//
// Default selections per set (overridable):
//   A    Hjorth mobility/complexity, Higuchi FD, Petrosian FD, spectral
//        entropy per channel, plus PSI and RIR over alpha_low, alpha_high,
//        beta, gamma                                  -> 13 x 32 = 416
//   B    windowed band PSD over alpha_high, beta      ->  2 x 32 = 64
//   C    windowed DWT energy+entropy; gamma (valence) ->  2 x 32 = 64
//        or theta..gamma (arousal)                    ->  8 x 32 = 256
//   D    per-mode stats over top modes; SP(ITED)+D(ISED) x4 (valence) = 256
//        or energy+SP(omega)+D(ISED) x3 (arousal)     -> 288
//   MHS  per-mode marginal spectra, 4 modes x 64 bins -> 8192
//   HHSA 5x5 holospectrum per channel                 -> 800

namespace eeg::pipe {

enum class SetId { A, B, C, D, MHS, HHSA };

SetId parse_set_id(const std::string& name);
std::string set_name(SetId id);

struct FeatureSetSpec {
  SetId id = SetId::A;
  std::vector<std::string> features;  // atomic feature names, set-dependent
  std::vector<std::string> bands;     // spectral bands (A/B) or DWT bands (C)
  int n_imfs = 4;                     // D / MHS / first-level cap for HHSA
  std::vector<std::string> channels;  // empty = all 32

  hht::SpectrumConfig mhs_cfg{5.0, 45.0, 64};
  hht::SpectrumConfig hhsa_carrier_cfg{5.0, 45.0, 5};
  hht::SpectrumConfig hhsa_am_cfg{5.0, 45.0, 5};
};

// Table-1 defaults; set C and D differ between the two label dimensions.
FeatureSetSpec default_spec(SetId id, Dimension dimension);

struct ExtractionParams {
  double window_s = 4.0;
  double hop_s = 2.0;
  emd::SiftConfig sift;                                       // max 10 modes
  std::vector<feat::BandDefinition> bands = feat::default_bands();
};

struct FeatureMatrix {
  learn::NumericMatrix values;
  std::vector<std::string> column_names;
  std::vector<std::string> trial_ids;
  int quality_flags = 0;  // trials padded because a decomposition came up short

  std::size_t rows() const { return values.rows; }
  std::size_t cols() const { return values.cols; }
};

FeatureMatrix build_feature_set(const std::vector<Trial>& trials, const FeatureSetSpec& spec,
                                const ExtractionParams& params, int threads = 0);

// Channel tag of a column name (the part after the last '@').
std::string column_channel(const std::string& column_name);

// Keeps only columns whose channel tag is listed.
FeatureMatrix reduce_channels(const FeatureMatrix& m, const std::vector<std::string>& channels);

}  // namespace eeg::pipe
