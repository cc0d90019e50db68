#include "eeg/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eeg/kernels.hpp"
#include "eeg/parallel.hpp"
#include "eeg/rng.hpp"

namespace eeg::learn {

NumericMatrix gather_rows(const NumericMatrix& m, const std::vector<std::size_t>& rows) {
  NumericMatrix out;
  out.rows = rows.size();
  out.cols = m.cols;
  out.data.resize(out.rows * out.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(m.row(rows[i]), m.cols, out.row(i));
  }
  return out;
}

CVFolds stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[static_cast<std::size_t>(c)].size() < static_cast<std::size_t>(k)) {
      throw std::invalid_argument("class " + std::to_string(c) + " has fewer members than folds");
    }
  }

  CVFolds out;
  out.seed = seed;
  out.folds.assign(static_cast<std::size_t>(k), {});
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[static_cast<std::size_t>(c)];
    Rng rng(mix_seed(seed, 0x5f0c5u + static_cast<std::uint64_t>(c)));
    rng.shuffle(idx);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.folds[i % static_cast<std::size_t>(k)].push_back(idx[i]);
    }
  }
  for (auto& f : out.folds) std::sort(f.begin(), f.end());
  return out;
}

std::array<double, 2> inverse_frequency_weights(const std::vector<int>& labels) {
  std::array<double, 2> counts{0.0, 0.0};
  for (int l : labels) counts[static_cast<std::size_t>(l)] += 1.0;
  const double n = static_cast<double>(labels.size());
  std::array<double, 2> w{1.0, 1.0};
  for (int c = 0; c < 2; ++c) {
    const auto cc = counts[static_cast<std::size_t>(c)];
    if (cc > 0.0) w[static_cast<std::size_t>(c)] = n / (2.0 * cc);
  }
  return w;
}

Standardizer fit_standardizer(const NumericMatrix& m) {
  Standardizer s;
  s.mean.assign(m.cols, 0.0);
  s.scale.assign(m.cols, 1.0);
  if (m.rows == 0) return s;
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) s.mean[c] += row[c];
  }
  for (double& v : s.mean) v /= static_cast<double>(m.rows);
  std::vector<double> var(m.cols, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double d = row[c] - s.mean[c];
      var[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < m.cols; ++c) {
    const double sd = std::sqrt(var[c] / static_cast<double>(m.rows));
    s.scale[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

NumericMatrix apply_standardizer(const Standardizer& s, const NumericMatrix& m) {
  NumericMatrix out = m;
  for (std::size_t r = 0; r < out.rows; ++r) {
    double* row = out.row(r);
    for (std::size_t c = 0; c < out.cols; ++c) row[c] = (row[c] - s.mean[c]) / s.scale[c];
  }
  return out;
}

PosteriorMatrix knn_fit_predict(const NumericMatrix& train, const std::vector<int>& train_labels,
                                const NumericMatrix& test, int k,
                                std::array<double, 2> class_weights) {
  if (train.rows == 0 || k <= 0 || static_cast<std::size_t>(k) > train.rows) {
    throw std::invalid_argument("K exceeds training size");
  }
  if (train_labels.size() != train.rows) throw std::invalid_argument("label count mismatch");
  if (test.cols != train.cols) throw std::invalid_argument("feature dimension mismatch");

  PosteriorMatrix out(test.rows);
  std::vector<std::pair<double, std::size_t>> dist(train.rows);
  for (std::size_t q = 0; q < test.rows; ++q) {
    const double* qrow = test.row(q);
    for (std::size_t i = 0; i < train.rows; ++i) {
      dist[i] = {kernels::active().sq_diff_sum(qrow, train.row(i), train.cols), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::array<double, 2> votes{0.0, 0.0};
    for (int j = 0; j < k; ++j) {
      const int label = train_labels[dist[static_cast<std::size_t>(j)].second];
      votes[static_cast<std::size_t>(label)] += class_weights[static_cast<std::size_t>(label)];
    }
    const double total = votes[0] + votes[1];
    out[q] = {votes[0] / total, votes[1] / total};
  }
  return out;
}

namespace {

struct TreeBuilder {
  const NumericMatrix& x;
  const std::vector<int>& y;
  const std::array<double, 2>& weights;
  int max_depth;
  std::size_t n_candidates;
  Rng& rng;
  std::vector<TreeNode>& nodes;
  std::vector<std::size_t> feature_pool;

  // value/label scratch sorted per candidate feature
  std::vector<std::pair<double, int>> scratch;

  static Posterior leaf_posterior(const std::array<double, 2>& wc) {
    const double t = wc[0] + wc[1];
    if (t <= 0.0) return {0.5, 0.5};
    return {wc[0] / t, wc[1] / t};
  }

  // weighted Gini impurity of a class-weight pair
  static double gini(const std::array<double, 2>& wc) {
    const double t = wc[0] + wc[1];
    if (t <= 0.0) return 0.0;
    const double p0 = wc[0] / t;
    const double p1 = wc[1] / t;
    return 1.0 - p0 * p0 - p1 * p1;
  }

  std::int32_t build(std::vector<std::size_t>& samples, int depth) {
    std::array<double, 2> wc{0.0, 0.0};
    for (std::size_t s : samples) {
      wc[static_cast<std::size_t>(y[s])] += weights[static_cast<std::size_t>(y[s])];
    }
    const auto node_id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[static_cast<std::size_t>(node_id)].posterior = leaf_posterior(wc);

    const bool pure = wc[0] <= 0.0 || wc[1] <= 0.0;
    if (pure || depth >= max_depth || samples.size() < 2) return node_id;

    // draw sqrt(d) candidate features without replacement
    const std::size_t d = x.cols;
    for (std::size_t i = 0; i < n_candidates; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.bounded(d - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }

    const double parent_total = wc[0] + wc[1];
    double best_score = gini(wc);  // must strictly improve on the parent
    int best_feature = -1;
    double best_threshold = 0.0;

    for (std::size_t ci = 0; ci < n_candidates; ++ci) {
      const std::size_t f = feature_pool[ci];
      scratch.clear();
      for (std::size_t s : samples) scratch.emplace_back(x.at(s, f), y[s]);
      std::sort(scratch.begin(), scratch.end());
      if (scratch.front().first == scratch.back().first) continue;

      std::array<double, 2> left{0.0, 0.0};
      for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        const auto cls = static_cast<std::size_t>(scratch[i].second);
        left[cls] += weights[cls];
        if (scratch[i].first == scratch[i + 1].first) continue;
        const std::array<double, 2> right{wc[0] - left[0], wc[1] - left[1]};
        const double lt = left[0] + left[1];
        const double rt = right[0] + right[1];
        const double score = (lt * gini(left) + rt * gini(right)) / parent_total;
        if (score < best_score - 1e-15) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (scratch[i].first + scratch[i + 1].first);
        }
      }
    }
    if (best_feature < 0) return node_id;  // no improving split among candidates

    std::vector<std::size_t> left_samples, right_samples;
    for (std::size_t s : samples) {
      (x.at(s, static_cast<std::size_t>(best_feature)) <= best_threshold ? left_samples
                                                                         : right_samples)
          .push_back(s);
    }
    if (left_samples.empty() || right_samples.empty()) return node_id;

    samples.clear();
    samples.shrink_to_fit();
    const std::int32_t left_id = build(left_samples, depth + 1);
    const std::int32_t right_id = build(right_samples, depth + 1);
    auto& node = nodes[static_cast<std::size_t>(node_id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = right_id;
    return node_id;
  }
};

const TreeNode& descend(const std::vector<TreeNode>& tree, const double* row) {
  std::size_t at = 0;
  while (tree[at].feature >= 0) {
    at = static_cast<std::size_t>(row[tree[at].feature] <= tree[at].threshold ? tree[at].left
                                                                              : tree[at].right);
  }
  return tree[at];
}

}  // namespace

RandomForest rf_fit(const NumericMatrix& train, const std::vector<int>& labels,
                    const RfParams& params, std::array<double, 2> class_weights,
                    std::uint64_t seed, int threads) {
  if (train.rows == 0) throw std::invalid_argument("empty training set");
  if (labels.size() != train.rows) throw std::invalid_argument("label count mismatch");
  if (params.estimators < 1 || params.depth < 1) throw std::invalid_argument("bad forest params");

  RandomForest model;
  model.n_features = train.cols;
  model.params = params;
  model.class_weights = class_weights;
  model.trees.resize(static_cast<std::size_t>(params.estimators));

  const std::size_t n = train.rows;
  const auto n_candidates = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(train.cols)))));

  parallel_for(model.trees.size(), threads, [&](std::size_t t) {
    Rng rng(mix_seed(seed, 0x7f03e5u, t));
    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) bootstrap[i] = static_cast<std::size_t>(rng.bounded(n));

    std::vector<TreeNode> nodes;
    TreeBuilder builder{train, labels, class_weights, params.depth,
                        n_candidates, rng, nodes, {}, {}};
    builder.feature_pool.resize(train.cols);
    std::iota(builder.feature_pool.begin(), builder.feature_pool.end(), 0);
    builder.build(bootstrap, 0);
    model.trees[t] = std::move(nodes);
  });
  return model;
}

PosteriorMatrix rf_predict(const RandomForest& model, const NumericMatrix& test) {
  if (test.cols != model.n_features) throw std::invalid_argument("feature dimension mismatch");
  PosteriorMatrix out(test.rows, Posterior{0.0, 0.0});
  const double inv = 1.0 / static_cast<double>(model.trees.size());
  for (std::size_t r = 0; r < test.rows; ++r) {
    const double* row = test.row(r);
    for (const auto& tree : model.trees) {
      const auto& leaf = descend(tree, row);
      out[r][0] += leaf.posterior[0];
      out[r][1] += leaf.posterior[1];
    }
    out[r][0] *= inv;
    out[r][1] *= inv;
  }
  return out;
}

std::vector<int> argmax_labels(const PosteriorMatrix& p) {
  std::vector<int> labels(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) labels[i] = p[i][1] >= p[i][0] ? 1 : 0;
  return labels;
}

Metrics metrics(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.empty() || predicted.size() != truth.size()) {
    throw std::invalid_argument("metrics need equal nonempty label vectors");
  }
  // confusion counts per class
  double correct = 0.0;
  std::array<double, 2> tp{0, 0}, fp{0, 0}, fn{0, 0}, support{0, 0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto q = static_cast<std::size_t>(predicted[i]);
    support[t] += 1.0;
    if (t == q) {
      correct += 1.0;
      tp[t] += 1.0;
    } else {
      fn[t] += 1.0;
      fp[q] += 1.0;
    }
  }
  const double n = static_cast<double>(truth.size());
  double weighted_f1 = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double denom = 2.0 * tp[c] + fp[c] + fn[c];
    const double f1 = denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
    weighted_f1 += (support[c] / n) * f1;
  }
  return {weighted_f1, correct / n};
}

Metrics metrics_from_posteriors(const PosteriorMatrix& p, const std::vector<int>& truth) {
  return metrics(argmax_labels(p), truth);
}

PosteriorMatrix late_fusion(const std::vector<PosteriorMatrix>& posteriors,
                            std::vector<double> fusion_weights) {
  if (posteriors.empty()) throw std::invalid_argument("nothing to fuse");
  const std::size_t n = posteriors.front().size();
  for (const auto& p : posteriors) {
    if (p.size() != n) throw std::invalid_argument("posterior shape mismatch");
  }
  if (fusion_weights.empty()) fusion_weights.assign(posteriors.size(), 1.0);
  if (fusion_weights.size() != posteriors.size()) {
    throw std::invalid_argument("fusion weight count mismatch");
  }

  PosteriorMatrix out(n, Posterior{0.0, 0.0});
  for (std::size_t m = 0; m < posteriors.size(); ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i][0] += fusion_weights[m] * posteriors[m][i][0];
      out[i][1] += fusion_weights[m] * posteriors[m][i][1];
    }
  }
  for (auto& row : out) {
    const double t = row[0] + row[1];
    if (t <= 0.0) throw std::invalid_argument("fused posterior row sums to zero");
    row[0] /= t;
    row[1] /= t;
  }
  return out;
}

std::string GridPoint::describe() const {
  if (kind == ClassifierKind::knn) return "knn(k=" + std::to_string(knn_k) + ")";
  return "rf(estimators=" + std::to_string(rf.estimators) + ",depth=" + std::to_string(rf.depth) +
         ")";
}

CvOutcome cross_validate(const NumericMatrix& features, const std::vector<int>& labels,
                         const CVFolds& folds, const GridPoint& point, std::uint64_t seed,
                         int threads) {
  CvOutcome out;
  out.out_of_fold.assign(labels.size(), Posterior{0.0, 0.0});

  for (std::size_t f = 0; f < folds.folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    const auto& test_idx = folds.folds[f];
    for (std::size_t g = 0; g < folds.folds.size(); ++g) {
      if (g == f) continue;
      train_idx.insert(train_idx.end(), folds.folds[g].begin(), folds.folds[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());

    NumericMatrix train = gather_rows(features, train_idx);
    NumericMatrix test = gather_rows(features, test_idx);
    std::vector<int> train_labels(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) train_labels[i] = labels[train_idx[i]];
    const auto weights = inverse_frequency_weights(train_labels);

    PosteriorMatrix fold_post;
    if (point.kind == ClassifierKind::knn) {
      const auto scaler = fit_standardizer(train);
      fold_post = knn_fit_predict(apply_standardizer(scaler, train), train_labels,
                                  apply_standardizer(scaler, test), point.knn_k, weights);
    } else {
      const auto model = rf_fit(train, train_labels, point.rf, weights,
                                mix_seed(seed, 0xcf01du, f), threads);
      fold_post = rf_predict(model, test);
    }

    std::vector<int> test_labels(test_idx.size());
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      test_labels[i] = labels[test_idx[i]];
      out.out_of_fold[test_idx[i]] = fold_post[i];
    }
    const auto m = metrics_from_posteriors(fold_post, test_labels);
    out.fold_metrics.f1.push_back(m.weighted_f1);
    out.fold_metrics.ca.push_back(m.accuracy);
  }
  const auto k = static_cast<double>(folds.folds.size());
  for (double v : out.fold_metrics.f1) out.fold_metrics.mean_f1 += v / k;
  for (double v : out.fold_metrics.ca) out.fold_metrics.mean_ca += v / k;
  return out;
}

GridSearchReport grid_search(const NumericMatrix& features, const std::vector<int>& labels,
                             const std::vector<GridPoint>& grid, const CVFolds& folds,
                             std::uint64_t seed, int threads) {
  if (grid.empty()) throw std::invalid_argument("empty grid");

  std::vector<CvOutcome> outcomes(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    outcomes[g] = cross_validate(features, labels, folds, grid[g], seed, 1);
  });

  auto better = [&](std::size_t a, std::size_t b) {
    const double fa = outcomes[a].fold_metrics.mean_f1;
    const double fb = outcomes[b].fold_metrics.mean_f1;
    if (fa != fb) return fa > fb;
    if (grid[a].kind == ClassifierKind::knn && grid[b].kind == ClassifierKind::knn) {
      return grid[a].knn_k < grid[b].knn_k;
    }
    if (grid[a].rf.estimators != grid[b].rf.estimators) {
      return grid[a].rf.estimators < grid[b].rf.estimators;
    }
    return grid[a].rf.depth < grid[b].rf.depth;
  };

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (better(g, best)) best = g;
  }

  GridSearchReport report;
  report.best = grid[best];
  report.scores.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    report.scores.emplace_back(grid[g], outcomes[g].fold_metrics.mean_f1);
  }
  report.best_outcome = std::move(outcomes[best]);
  return report;
}

std::vector<GridPoint> default_rf_grid() {
  std::vector<GridPoint> grid;
  for (int est = 50; est <= 300; est += 50) {
    for (int depth = 6; depth <= 18; depth += 2) {
      GridPoint p;
      p.kind = ClassifierKind::random_forest;
      p.rf = {est, depth};
      grid.push_back(p);
    }
  }
  return grid;
}

std::vector<GridPoint> default_knn_grid() {
  std::vector<GridPoint> grid;
  for (int k : {3, 5, 8}) {
    GridPoint p;
    p.kind = ClassifierKind::knn;
    p.knn_k = k;
    grid.push_back(p);
  }
  return grid;
}

}  // namespace eeg::learn
