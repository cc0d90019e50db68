#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

// Classification harness: stratified k-fold splits, brute-force KNN and
// bagged CART random forests with class weights, grid search over identical
// folds, posterior late fusion, and weighted-F1/accuracy metrics.
//
// Labels are 0 = low, 1 = high throughout. Posterior rows are (p_low, p_high).

namespace eeg::learn {

struct NumericMatrix {
  std::vector<double> data;  // row-major
  std::size_t rows = 0;
  std::size_t cols = 0;

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

NumericMatrix gather_rows(const NumericMatrix& m, const std::vector<std::size_t>& rows);

using Posterior = std::array<double, 2>;
using PosteriorMatrix = std::vector<Posterior>;

struct CVFolds {
  std::vector<std::vector<std::size_t>> folds;
  std::uint64_t seed = 0;
};

// Deterministic shuffled-within-class round-robin assignment; per-fold
// class counts deviate from perfect stratification by at most one.
CVFolds stratified_kfold(const std::vector<int>& labels, int k = 5, std::uint64_t seed = 0);

// n_total / (2 * n_class) per class.
std::array<double, 2> inverse_frequency_weights(const std::vector<int>& labels);

// Per-feature z-scoring fitted on training rows only; zero-variance
// features pass through unscaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;
};
Standardizer fit_standardizer(const NumericMatrix& m);
NumericMatrix apply_standardizer(const Standardizer& s, const NumericMatrix& m);

// Euclidean K nearest neighbors with class-weighted votes; distance ties
// break toward the lower training row index. Callers standardize features
// with training-fold statistics first.
PosteriorMatrix knn_fit_predict(const NumericMatrix& train, const std::vector<int>& train_labels,
                                const NumericMatrix& test, int k = 3,
                                std::array<double, 2> class_weights = {1.0, 1.0});

struct RfParams {
  int estimators = 100;
  int depth = 12;
};

struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  Posterior posterior{0.0, 0.0};
};

struct RandomForest {
  std::vector<std::vector<TreeNode>> trees;
  std::size_t n_features = 0;
  RfParams params;
  std::array<double, 2> class_weights{1.0, 1.0};
};

// Bagged CART: bootstrap of size n per tree, class-weighted Gini splits
// over sqrt(d) candidate features, leaves pure or at the depth cap. Tree t
// draws from a stream keyed by (seed, t), so fits are identical for any
// thread count.
RandomForest rf_fit(const NumericMatrix& train, const std::vector<int>& labels,
                    const RfParams& params, std::array<double, 2> class_weights,
                    std::uint64_t seed, int threads = 1);

// Mean of per-tree leaf class distributions.
PosteriorMatrix rf_predict(const RandomForest& model, const NumericMatrix& test);

struct Metrics {
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
};

// Argmax labels; posterior ties resolve to high.
std::vector<int> argmax_labels(const PosteriorMatrix& p);
Metrics metrics(const std::vector<int>& predicted, const std::vector<int>& truth);
Metrics metrics_from_posteriors(const PosteriorMatrix& p, const std::vector<int>& truth);

// Row-wise weighted mean of equally shaped posterior matrices, renormalized.
PosteriorMatrix late_fusion(const std::vector<PosteriorMatrix>& posteriors,
                            std::vector<double> fusion_weights = {});

struct FoldMetrics {
  std::vector<double> f1;  // per fold
  std::vector<double> ca;
  double mean_f1 = 0.0;
  double mean_ca = 0.0;
};

struct CvOutcome {
  FoldMetrics fold_metrics;
  PosteriorMatrix out_of_fold;  // posterior per trial, predicted by the fold not training on it
};

enum class ClassifierKind { knn, random_forest };

struct GridPoint {
  ClassifierKind kind = ClassifierKind::random_forest;
  RfParams rf;
  int knn_k = 3;

  std::string describe() const;
};

struct GridSearchReport {
  GridPoint best;
  CvOutcome best_outcome;
  std::vector<std::pair<GridPoint, double>> scores;  // mean weighted F1 per point
};

// Cross-validates one configuration on the given folds. KNN standardizes
// per fold with training statistics; the forest consumes raw features.
CvOutcome cross_validate(const NumericMatrix& features, const std::vector<int>& labels,
                         const CVFolds& folds, const GridPoint& point, std::uint64_t seed,
                         int threads = 1);

// Evaluates every point on identical folds; selects by mean weighted F1
// with ties broken by fewer estimators, then smaller depth (smaller K for
// KNN grids).
GridSearchReport grid_search(const NumericMatrix& features, const std::vector<int>& labels,
                             const std::vector<GridPoint>& grid, const CVFolds& folds,
                             std::uint64_t seed, int threads = 1);

// Paper-default grids.
std::vector<GridPoint> default_rf_grid();
std::vector<GridPoint> default_knn_grid();

}  // namespace eeg::learn
