#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eeg/feature_sets.hpp"
#include "eeg/learn.hpp"

// Feature-subset enumeration and incremental per-mode evaluation, both
// driven by a caller-supplied scoring callback (typically a CV accuracy or
// weighted F1 from the learn module).

namespace eeg::pipe {

using Evaluator =
    std::function<double(const learn::NumericMatrix& features, const std::vector<int>& labels)>;

struct IncrementalImfReport {
  std::vector<double> scores;  // scores[k-1] = evaluator on modes 1..k
  int best_count = 0;
};

// Evaluates mode subsets {1}, {1,2}, ..., {1..max}. The matrix must carry
// per-mode columns tagged @imfK@ (a set-D style matrix built with
// n_imfs = max).
IncrementalImfReport incremental_imf_eval(const FeatureMatrix& imf_matrix,
                                          const std::vector<int>& labels,
                                          const Evaluator& evaluator, int max_imfs = 10);

struct FeatureGroup {
  std::string name;
  std::vector<std::size_t> columns;
};

struct SubsetReport {
  std::uint32_t best_mask = 0;
  double best_score = 0.0;
  std::vector<double> scores;                 // indexed by mask, mask 0 unused
  std::vector<std::uint32_t> within_margin;   // smallest subsets first
  double majority_baseline = 0.0;
  bool none_informative = false;  // no subset beats the baseline by the margin
};

// Exhaustive enumeration over group subsets (<= 12 groups); returns every
// subset within `margin` of the best score, preferring smaller subsets.
// The none_informative flag presumes an accuracy-like evaluator.
SubsetReport subset_search(const learn::NumericMatrix& features, const std::vector<int>& labels,
                           const std::vector<FeatureGroup>& groups, const Evaluator& evaluator,
                           double margin = 0.005);

// Greedy forward selection for larger group counts.
SubsetReport greedy_subset_search(const learn::NumericMatrix& features,
                                  const std::vector<int>& labels,
                                  const std::vector<FeatureGroup>& groups,
                                  const Evaluator& evaluator, double margin = 0.005);

}  // namespace eeg::pipe
