#include "doctest.h"
#include "eeg/learn.hpp"
#include "eeg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace eeg;
using namespace eeg::learn;

namespace {

NumericMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  NumericMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.data.resize(rows * cols);
  for (auto& v : m.data) v = rng.normal();
  return m;
}

// Two well-separated Gaussian blobs; label 1 iff the blob center is +4.
NumericMatrix blobs(std::size_t n, std::size_t d, std::vector<int>& labels, std::uint64_t seed,
                    double separation = 4.0) {
  Rng rng(seed);
  NumericMatrix m;
  m.rows = n;
  m.cols = d;
  m.data.resize(n * d);
  labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    labels[r] = static_cast<int>(r % 2);
    const double center = labels[r] == 1 ? separation : -separation;
    for (std::size_t c = 0; c < d; ++c) m.data[r * d + c] = center + rng.normal();
  }
  return m;
}

}  // namespace

TEST_CASE("stratified folds split 10+5 exactly") {
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) labels.push_back(1);
  for (int i = 0; i < 5; ++i) labels.push_back(0);
  const auto cv = stratified_kfold(labels, 5, 0);
  for (const auto& fold : cv.folds) {
    int high = 0, low = 0;
    for (auto idx : fold) (labels[idx] == 1 ? high : low)++;
    CHECK(high == 2);
    CHECK(low == 1);
  }
}

TEST_CASE("stratified folds handle the 808/472 split") {
  std::vector<int> labels(808, 1);
  labels.insert(labels.end(), 472, 0);
  const auto cv = stratified_kfold(labels, 5, 7);
  std::size_t total = 0;
  for (const auto& fold : cv.folds) {
    int high = 0, low = 0;
    for (auto idx : fold) (labels[idx] == 1 ? high : low)++;
    CHECK((high == 161 || high == 162));
    CHECK((low == 94 || low == 95));
    total += fold.size();
  }
  CHECK(total == 1280);
}

TEST_CASE("same seed gives identical folds") {
  std::vector<int> labels;
  Rng rng(3);
  for (int i = 0; i < 100; ++i) labels.push_back(static_cast<int>(rng.bounded(2)));
  while (std::count(labels.begin(), labels.end(), 0) < 5) labels[0] = 0;
  const auto a = stratified_kfold(labels, 5, 42);
  const auto b = stratified_kfold(labels, 5, 42);
  CHECK(a.folds == b.folds);
  const auto c = stratified_kfold(labels, 5, 43);
  CHECK(a.folds != c.folds);
}

TEST_CASE("stratification deviates by at most one per class") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(rng.bounded(6));
    std::vector<int> labels;
    const std::size_t n = 40 + rng.bounded(200);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(static_cast<int>(rng.bounded(2)));
    const auto n1 = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (n1 < static_cast<std::size_t>(k) || (n - n1) < static_cast<std::size_t>(k)) continue;

    const auto cv = stratified_kfold(labels, k, trial);
    for (int cls = 0; cls < 2; ++cls) {
      const auto total = static_cast<double>(cls == 1 ? n1 : n - n1);
      const double ideal = total / k;
      for (const auto& fold : cv.folds) {
        double count = 0;
        for (auto idx : fold) {
          if (labels[idx] == cls) count += 1.0;
        }
        CHECK(std::abs(count - ideal) <= 1.0);
      }
    }
  }
}

TEST_CASE("a class smaller than k is rejected") {
  std::vector<int> labels(20, 1);
  labels[0] = 0;
  CHECK_THROWS_AS(stratified_kfold(labels, 5, 0), std::invalid_argument);
}

TEST_CASE("KNN on a training point with unanimous neighbors") {
  NumericMatrix train;
  train.rows = 4;
  train.cols = 1;
  train.data = {0.0, 0.1, -0.1, 10.0};
  const std::vector<int> labels{1, 1, 1, 0};
  NumericMatrix test;
  test.rows = 1;
  test.cols = 1;
  test.data = {0.0};
  const auto post = knn_fit_predict(train, labels, test, 3);
  CHECK(post[0][1] == 1.0);
  CHECK(post[0][0] == 0.0);
}

TEST_CASE("KNN matches a brute-force oracle exactly") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 20 + rng.bounded(80);
    const std::size_t d = 1 + rng.bounded(20);
    const std::size_t q = 5 + rng.bounded(10);
    auto train = random_matrix(n, d, seed * 3 + 1);
    auto test = random_matrix(q, d, seed * 3 + 2);
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.bounded(2));
    const std::array<double, 2> w{1.0 + rng.uniform(), 1.0 + rng.uniform()};
    const int k = 1 + static_cast<int>(rng.bounded(5));

    const auto post = knn_fit_predict(train, labels, test, k, w);

    for (std::size_t t = 0; t < q; ++t) {
      // oracle: repeatedly select the closest unused neighbor
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          const double diff = test.at(t, c) - train.at(i, c);
          s += diff * diff;
        }
        dist.emplace_back(s, i);
      }
      std::array<double, 2> votes{0.0, 0.0};
      std::vector<bool> used(n, false);
      for (int j = 0; j < k; ++j) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (used[i]) continue;
          if (best == n || dist[i] < dist[best]) best = i;
        }
        used[best] = true;
        const auto cls = static_cast<std::size_t>(labels[best]);
        votes[cls] += w[cls];
      }
      CHECK(post[t][0] == votes[0] / (votes[0] + votes[1]));
      CHECK(post[t][1] == votes[1] / (votes[0] + votes[1]));
    }
  }
}

TEST_CASE("KNN weighted vote arithmetic") {
  NumericMatrix train;
  train.rows = 3;
  train.cols = 1;
  train.data = {0.0, 0.2, -0.2};
  const std::vector<int> labels{1, 1, 0};
  NumericMatrix test;
  test.rows = 1;
  test.cols = 1;
  test.data = {0.0};
  const auto post = knn_fit_predict(train, labels, test, 3, {2.0, 1.0});
  CHECK(post[0][0] == doctest::Approx(0.5));
  CHECK(post[0][1] == doctest::Approx(0.5));
}

TEST_CASE("KNN rejects K beyond the training size") {
  auto train = random_matrix(3, 2, 1);
  auto test = random_matrix(1, 2, 2);
  CHECK_THROWS_AS(knn_fit_predict(train, {0, 1, 0}, test, 5), std::invalid_argument);
}

TEST_CASE("forest fits separable blobs perfectly") {
  std::vector<int> labels;
  const auto x = blobs(60, 4, labels, 10);
  const auto model = rf_fit(x, labels, {50, 12}, {1.0, 1.0}, 0);
  const auto post = rf_predict(model, x);
  const auto m = metrics_from_posteriors(post, labels);
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("a depth-1 tree cannot express XOR") {
  NumericMatrix x;
  x.rows = 40;
  x.cols = 2;
  std::vector<int> labels(40);
  Rng rng(4);
  for (std::size_t i = 0; i < 40; ++i) {
    const int a = static_cast<int>(i % 2);
    const int b = static_cast<int>((i / 2) % 2);
    x.data.push_back((a == 1 ? 1.0 : -1.0) + 0.05 * rng.normal());
    x.data.push_back((b == 1 ? 1.0 : -1.0) + 0.05 * rng.normal());
    labels[i] = a ^ b;
  }
  const auto model = rf_fit(x, labels, {1, 1}, {1.0, 1.0}, 0);
  const auto m = metrics_from_posteriors(rf_predict(model, x), labels);
  CHECK(m.accuracy <= 0.75 + 1e-12);
}

TEST_CASE("forest predictions are deterministic given the seed") {
  std::vector<int> labels;
  const auto x = blobs(50, 3, labels, 11, 1.0);
  const auto held = random_matrix(20, 3, 99);
  const auto a = rf_predict(rf_fit(x, labels, {30, 8}, {1.0, 1.0}, 5), held);
  const auto b = rf_predict(rf_fit(x, labels, {30, 8}, {1.0, 1.0}, 5), held);
  CHECK(a == b);
  // and identical across thread counts
  const auto c = rf_predict(rf_fit(x, labels, {30, 8}, {1.0, 1.0}, 5, 4), held);
  CHECK(a == c);
}

TEST_CASE("forest posterior averaging arithmetic") {
  RandomForest model;
  model.n_features = 1;
  model.trees.resize(2);
  model.trees[0].push_back(TreeNode{-1, 0.0, -1, -1, {0.8, 0.2}});
  model.trees[1].push_back(TreeNode{-1, 0.0, -1, -1, {0.4, 0.6}});
  NumericMatrix test;
  test.rows = 1;
  test.cols = 1;
  test.data = {0.0};
  const auto post = rf_predict(model, test);
  CHECK(post[0][0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(post[0][1] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("posterior rows sum to one") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<int> labels;
    const auto x = blobs(30, 3, labels, seed, 0.5);
    const auto post = rf_predict(rf_fit(x, labels, {15, 6}, {1.3, 0.9}, seed), x);
    for (const auto& row : post) {
      CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("empty training set is rejected") {
  NumericMatrix empty;
  CHECK_THROWS_AS(rf_fit(empty, {}, {10, 4}, {1.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("prediction rejects mismatched dimensions") {
  std::vector<int> labels;
  const auto x = blobs(20, 3, labels, 1);
  const auto model = rf_fit(x, labels, {5, 4}, {1.0, 1.0}, 0);
  const auto bad = random_matrix(4, 2, 3);
  CHECK_THROWS_AS(rf_predict(model, bad), std::invalid_argument);
}

TEST_CASE("argmax labels break ties toward high") {
  const PosteriorMatrix p{{0.5, 0.5}, {0.6, 0.4}, {0.2, 0.8}};
  CHECK(argmax_labels(p) == std::vector<int>{1, 0, 1});
}

TEST_CASE("metrics on perfect predictions") {
  const std::vector<int> y{1, 0, 1, 0};
  const auto m = metrics(y, y);
  CHECK(m.weighted_f1 == 1.0);
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("metrics match the hand-computed confusion example") {
  // class high: TP=3 FN=1 FP=2 TN=4; n_high=4, n_low=6
  const std::vector<int> truth{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  const std::vector<int> pred{1, 1, 1, 0, 1, 1, 0, 0, 0, 0};
  const auto m = metrics(pred, truth);
  CHECK(m.weighted_f1 == doctest::Approx(0.7030).epsilon(1e-3));
  CHECK(m.accuracy == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("majority predictor accuracy on the 808/472 split") {
  std::vector<int> truth(808, 1);
  truth.insert(truth.end(), 472, 0);
  const std::vector<int> pred(1280, 1);
  const auto m = metrics(pred, truth);
  CHECK(m.accuracy == doctest::Approx(808.0 / 1280.0).epsilon(1e-12));
}

TEST_CASE("metric inputs must be nonempty and aligned") {
  CHECK_THROWS_AS(metrics({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(metrics({1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("fusing identical posteriors is the identity") {
  const PosteriorMatrix p{{0.7, 0.3}, {0.2, 0.8}};
  const auto fused = late_fusion({p, p});
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(fused[i][0] == doctest::Approx(p[i][0]).epsilon(1e-12));
    CHECK(fused[i][1] == doctest::Approx(p[i][1]).epsilon(1e-12));
  }
}

TEST_CASE("fusion averaging arithmetic") {
  const PosteriorMatrix a{{0.6, 0.4}};
  const PosteriorMatrix b{{0.2, 0.8}};
  const auto fused = late_fusion({a, b});
  CHECK(fused[0][0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(fused[0][1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("fusion rejects mismatched shapes") {
  const PosteriorMatrix a{{0.6, 0.4}};
  const PosteriorMatrix b{{0.2, 0.8}, {0.5, 0.5}};
  CHECK_THROWS_AS(late_fusion({a, b}), std::invalid_argument);
}

TEST_CASE("grid search returns the single point") {
  std::vector<int> labels;
  const auto x = blobs(40, 3, labels, 2);
  const auto folds = stratified_kfold(labels, 5, 0);
  GridPoint p;
  p.rf = {20, 6};
  const auto report = grid_search(x, labels, {p}, folds, 0);
  CHECK(report.best.rf.estimators == 20);
  CHECK(report.scores.size() == 1);
}

TEST_CASE("default RF grid has 42 points") { CHECK(default_rf_grid().size() == 42); }

TEST_CASE("grid ties prefer fewer estimators") {
  std::vector<int> labels;
  const auto x = blobs(40, 3, labels, 3);  // separable: every config scores 1.0
  const auto folds = stratified_kfold(labels, 5, 0);
  GridPoint big, small;
  big.rf = {100, 8};
  small.rf = {50, 8};
  const auto report = grid_search(x, labels, {big, small}, folds, 0);
  CHECK(report.scores[0].second == report.scores[1].second);
  CHECK(report.best.rf.estimators == 50);
}

TEST_CASE("class weights lift minority recall on imbalanced data") {
  double weighted_recall = 0.0, unweighted_recall = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const std::size_t n = 120;
    NumericMatrix x;
    x.rows = n;
    x.cols = 2;
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = i < 100 ? 0 : 1;  // heavy majority of lows
      const double center = labels[i] == 1 ? 1.0 : -1.0;
      x.data.push_back(center + 1.4 * rng.normal());
      x.data.push_back(center + 1.4 * rng.normal());
    }
    const auto w = inverse_frequency_weights(labels);
    const auto pw = rf_predict(rf_fit(x, labels, {40, 4}, w, seed), x);
    const auto pu = rf_predict(rf_fit(x, labels, {40, 4}, {1.0, 1.0}, seed), x);
    const auto recall = [&](const PosteriorMatrix& p) {
      const auto pred = argmax_labels(p);
      double tp = 0.0, total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == 1) {
          total += 1.0;
          if (pred[i] == 1) tp += 1.0;
        }
      }
      return tp / total;
    };
    weighted_recall += recall(pw) / 10.0;
    unweighted_recall += recall(pu) / 10.0;
  }
  CHECK(weighted_recall >= unweighted_recall);
}

TEST_CASE("cross-validation is bit-identical across runs and thread counts") {
  std::vector<int> labels;
  const auto x = blobs(50, 4, labels, 8, 1.0);
  const auto folds = stratified_kfold(labels, 5, 1);
  GridPoint p;
  p.rf = {20, 6};
  const auto a = cross_validate(x, labels, folds, p, 3, 1);
  const auto b = cross_validate(x, labels, folds, p, 3, 4);
  CHECK(a.out_of_fold == b.out_of_fold);
  CHECK(a.fold_metrics.f1 == b.fold_metrics.f1);
}
