#include "eeg/selection.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace eeg::pipe {

namespace {

learn::NumericMatrix gather_columns(const learn::NumericMatrix& m,
                                    const std::vector<std::size_t>& cols) {
  learn::NumericMatrix out;
  out.rows = m.rows;
  out.cols = cols.size();
  out.data.resize(out.rows * out.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out.data[r * cols.size() + i] = m.at(r, cols[i]);
    }
  }
  return out;
}

double majority_fraction(const std::vector<int>& labels) {
  double high = 0.0;
  for (int l : labels) high += l;
  const double frac = high / static_cast<double>(labels.size());
  return std::max(frac, 1.0 - frac);
}

}  // namespace

IncrementalImfReport incremental_imf_eval(const FeatureMatrix& imf_matrix,
                                          const std::vector<int>& labels,
                                          const Evaluator& evaluator, int max_imfs) {
  if (imf_matrix.rows() != labels.size()) throw std::invalid_argument("label count mismatch");

  // columns per mode index, parsed from the @imfK@ tag
  std::vector<std::vector<std::size_t>> by_imf(static_cast<std::size_t>(max_imfs));
  for (std::size_t c = 0; c < imf_matrix.column_names.size(); ++c) {
    const auto& name = imf_matrix.column_names[c];
    const auto pos = name.find("@imf");
    if (pos == std::string::npos) continue;
    const int k = std::atoi(name.c_str() + pos + 4);
    if (k >= 1 && k <= max_imfs) by_imf[static_cast<std::size_t>(k - 1)].push_back(c);
  }
  if (by_imf[0].empty()) throw std::invalid_argument("matrix has no per-mode columns");

  IncrementalImfReport report;
  std::vector<std::size_t> cols;
  for (int k = 1; k <= max_imfs; ++k) {
    const auto& extra = by_imf[static_cast<std::size_t>(k - 1)];
    cols.insert(cols.end(), extra.begin(), extra.end());
    report.scores.push_back(evaluator(gather_columns(imf_matrix.values, cols), labels));
  }
  report.best_count =
      1 + static_cast<int>(std::max_element(report.scores.begin(), report.scores.end()) -
                           report.scores.begin());
  return report;
}

namespace {

SubsetReport finish_report(SubsetReport report, const std::vector<int>& labels, double margin) {
  report.majority_baseline = majority_fraction(labels);
  report.none_informative = report.best_score <= report.majority_baseline + margin;
  return report;
}

}  // namespace

SubsetReport subset_search(const learn::NumericMatrix& features, const std::vector<int>& labels,
                           const std::vector<FeatureGroup>& groups, const Evaluator& evaluator,
                           double margin) {
  if (groups.empty()) throw std::invalid_argument("no feature groups");
  if (groups.size() > 12) {
    throw std::invalid_argument("more than 12 groups; use greedy_subset_search");
  }

  const auto n_masks = static_cast<std::uint32_t>(1u << groups.size());
  SubsetReport report;
  report.scores.assign(n_masks, 0.0);

  double best = -1.0;
  for (std::uint32_t mask = 1; mask < n_masks; ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (mask & (1u << g)) cols.insert(cols.end(), groups[g].columns.begin(), groups[g].columns.end());
    }
    report.scores[mask] = evaluator(gather_columns(features, cols), labels);
    best = std::max(best, report.scores[mask]);
  }

  for (std::uint32_t mask = 1; mask < n_masks; ++mask) {
    if (report.scores[mask] >= best - margin) report.within_margin.push_back(mask);
  }
  std::sort(report.within_margin.begin(), report.within_margin.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const auto pa = std::popcount(a), pb = std::popcount(b);
              if (pa != pb) return pa < pb;
              if (report.scores[a] != report.scores[b]) return report.scores[a] > report.scores[b];
              return a < b;
            });
  report.best_mask = report.within_margin.front();
  report.best_score = report.scores[report.best_mask];
  return finish_report(std::move(report), labels, margin);
}

SubsetReport greedy_subset_search(const learn::NumericMatrix& features,
                                  const std::vector<int>& labels,
                                  const std::vector<FeatureGroup>& groups,
                                  const Evaluator& evaluator, double margin) {
  if (groups.empty()) throw std::invalid_argument("no feature groups");

  SubsetReport report;
  std::uint32_t current = 0;
  double current_score = -1.0;
  std::vector<std::size_t> cols;

  // add the best group while it improves the score
  while (true) {
    std::uint32_t best_mask = current;
    double best_score = current_score;
    std::vector<std::size_t> best_cols;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (current & (1u << g)) continue;
      auto trial_cols = cols;
      trial_cols.insert(trial_cols.end(), groups[g].columns.begin(), groups[g].columns.end());
      const double score = evaluator(gather_columns(features, trial_cols), labels);
      if (score > best_score) {
        best_score = score;
        best_mask = current | (1u << g);
        best_cols = std::move(trial_cols);
      }
    }
    if (best_mask == current) break;
    current = best_mask;
    current_score = best_score;
    cols = std::move(best_cols);
  }

  report.best_mask = current;
  report.best_score = current_score;
  report.within_margin = {current};
  return finish_report(std::move(report), labels, margin);
}

}  // namespace eeg::pipe
