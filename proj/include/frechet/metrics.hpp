#pragma once

// Clustering evaluation: label alignment by optimal assignment, accuracy,
// and total / normalized dispersion with recomputed centroids.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "frechet/error.hpp"
#include "frechet/mean.hpp"
#include "frechet/spd.hpp"

namespace frechet {

using Confusion = std::vector<std::vector<std::int64_t>>;

namespace detail {

// Minimum-cost perfect assignment on a square integer matrix (potentials method, O(k³)).
// Returns row -> column.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Best total weight over assignments of the given rows to the given columns.
inline std::int64_t max_weight(const Confusion& w, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty()) return 0;
  std::int64_t top = 0;
  for (int r : rows)
    for (int c : cols) top = std::max(top, w[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  std::vector<std::vector<std::int64_t>> cost(rows.size(), std::vector<std::int64_t>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      cost[a][b] = top - w[static_cast<std::size_t>(rows[a])][static_cast<std::size_t>(cols[b])];
  const auto assign = min_cost_assignment(cost);
  std::int64_t total = 0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    total += w[static_cast<std::size_t>(rows[a])][static_cast<std::size_t>(cols[static_cast<std::size_t>(assign[a])])];
  return total;
}

inline void check_labels(const std::vector<int>& labels, int k, const char* which) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0 || labels[i] >= k)
      fail(ErrorCode::LabelOutOfRange, std::string(which) + " label " + std::to_string(labels[i]) + " at index " +
                                           std::to_string(i) + " is outside [0, " + std::to_string(k) + ")");
}

}  // namespace detail

/// confusion[t][p] counts points with true label t and predicted label p.
inline Confusion confusion_matrix(const std::vector<int>& labels_true, const std::vector<int>& labels_pred, int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  if (labels_true.size() != labels_pred.size()) fail(ErrorCode::DimMismatch, "label vectors differ in length");
  detail::check_labels(labels_true, k, "true");
  detail::check_labels(labels_pred, k, "predicted");
  Confusion c(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < labels_true.size(); ++i)
    ++c[static_cast<std::size_t>(labels_true[i])][static_cast<std::size_t>(labels_pred[i])];
  return c;
}

struct Alignment {
  std::vector<int> permutation;  ///< true label t is matched with predicted label permutation[t]
  Confusion confusion;           ///< raw confusion, rows = true, columns = predicted
  std::int64_t matched = 0;      ///< Σ_t confusion[t][permutation[t]]
};

/// Optimal matching of true to predicted labels; among optimal matchings the
/// lexicographically smallest permutation is returned.
inline Alignment hungarian_align(const std::vector<int>& labels_true, const std::vector<int>& labels_pred, int k) {
  Alignment out;
  out.confusion = confusion_matrix(labels_true, labels_pred, k);
  std::vector<int> rows(static_cast<std::size_t>(k)), cols(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(i)] = i;
  const std::int64_t best = detail::max_weight(out.confusion, rows, cols);

  // Fix the permutation one row at a time, taking the smallest column that keeps the optimum reachable.
  std::int64_t prefix = 0;
  for (int r = 0; r < k; ++r) {
    rows.erase(rows.begin());
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      const int c = cols[ci];
      std::vector<int> rest = cols;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(ci));
      const std::int64_t here = out.confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (prefix + here + detail::max_weight(out.confusion, rows, rest) == best) {
        out.permutation.push_back(c);
        prefix += here;
        cols = std::move(rest);
        break;
      }
    }
  }
  out.matched = best;
  return out;
}

/// Confusion with columns reordered so the matched pairs sit on the diagonal.
inline Confusion aligned_confusion(const Alignment& a) {
  Confusion out = a.confusion;
  for (std::size_t t = 0; t < out.size(); ++t)
    for (std::size_t s = 0; s < out.size(); ++s) out[t][s] = a.confusion[t][static_cast<std::size_t>(a.permutation[s])];
  return out;
}

inline double accuracy(const std::vector<int>& labels_true, const std::vector<int>& labels_pred, int k) {
  if (labels_true.empty()) fail(ErrorCode::TooFewPoints, "accuracy of an empty labelling");
  const Alignment a = hungarian_align(labels_true, labels_pred, k);
  return static_cast<double>(a.matched) / static_cast<double>(labels_true.size());
}

enum class MeanMethod { GD, ICM };

struct DispersionResult {
  double value = 0.0;
  int empty_clusters = 0;  ///< scored as zero-dispersion clusters
  std::vector<SpdMatrix> centroids;  ///< one per non-empty cluster, in label order
};

/// Σ_i (1/|CL_i|) Σ_{x∈CL_i} d(x, c_i)² with c_i recomputed from the labels. Under the log-Euclidean
/// metric the centroid is always the log-Euclidean mean, the minimiser for that metric.
inline DispersionResult total_dispersion_detailed(const std::vector<SpdMatrix>& data, const std::vector<int>& labels,
                                                  int k, Metric metric = Metric::Affine,
                                                  MeanMethod mean_method = MeanMethod::ICM,
                                                  const MeanSolverConfig& mean_cfg = {}) {
  if (labels.size() != data.size()) fail(ErrorCode::DimMismatch, "labels and data differ in length");
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  detail::check_labels(labels, k, "cluster");
  std::vector<std::vector<SpdMatrix>> groups(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < data.size(); ++i) {
    check_same_dim(data.front().dim(), data[i].dim());
    groups[static_cast<std::size_t>(labels[i])].push_back(data[i]);
  }
  DispersionResult out;
  for (const auto& g : groups) {
    if (g.empty()) {
      ++out.empty_clusters;
      continue;
    }
    SpdMatrix c = metric == Metric::LogEuclidean ? log_euclidean_mean(g)
                  : mean_method == MeanMethod::GD ? frechet_mean_gd(g, mean_cfg).mean
                                                  : frechet_mean_icm(g);
    out.value += cluster_dispersion(g, c, metric);
    out.centroids.push_back(std::move(c));
  }
  return out;
}

inline double total_dispersion(const std::vector<SpdMatrix>& data, const std::vector<int>& labels, int k,
                               Metric metric = Metric::Affine, MeanMethod mean_method = MeanMethod::ICM) {
  return total_dispersion_detailed(data, labels, k, metric, mean_method).value;
}

/// totdisp(pred) / totdisp(truth); may fall below 1.
inline double normalized_dispersion(const std::vector<SpdMatrix>& data, const std::vector<int>& labels_pred,
                                    const std::vector<int>& labels_true, int k, Metric metric = Metric::Affine,
                                    MeanMethod mean_method = MeanMethod::ICM) {
  const double pred = total_dispersion(data, labels_pred, k, metric, mean_method);
  const double truth = total_dispersion(data, labels_true, k, metric, mean_method);
  if (truth == 0.0) return pred == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return pred / truth;
}

struct EvalReport {
  double accuracy = 0.0;
  Confusion confusion;  ///< aligned: diagonal holds the matched counts
  std::vector<int> assignment;
  double totdisp = 0.0;
  double truth_totdisp = 0.0;
  double normalized_totdisp = 0.0;
  int empty_clusters = 0;
  std::map<std::string, double> runtime_seconds;
};

inline EvalReport evaluate(const std::vector<SpdMatrix>& data, const std::vector<int>& labels_true,
                           const std::vector<int>& labels_pred, int k, Metric metric = Metric::Affine,
                           MeanMethod mean_method = MeanMethod::ICM) {
  EvalReport r;
  const Alignment a = hungarian_align(labels_true, labels_pred, k);
  r.accuracy = static_cast<double>(a.matched) / static_cast<double>(labels_true.size());
  r.assignment = a.permutation;
  r.confusion = aligned_confusion(a);
  const DispersionResult pred = total_dispersion_detailed(data, labels_pred, k, metric, mean_method);
  const DispersionResult truth = total_dispersion_detailed(data, labels_true, k, metric, mean_method);
  r.totdisp = pred.value;
  r.truth_totdisp = truth.value;
  r.empty_clusters = pred.empty_clusters;
  r.normalized_totdisp = truth.value == 0.0 ? (pred.value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                            : pred.value / truth.value;
  return r;
}

}  // namespace frechet
