#include "axeval/knn.hpp"

#include <algorithm>
#include <string>

#include "axeval/errors.hpp"

namespace axeval {

KnnModel::KnnModel(const Dataset& ds, const std::vector<int>& targets,
                   std::vector<std::size_t> subset, std::size_t k)
    : subset_(std::move(subset)), rows_(ds.rows()), k_(k) {
  if (subset_.empty()) throw ConfigError("knn: empty feature subset");
  std::vector<bool> seen(ds.cols(), false);
  for (std::size_t j : subset_) {
    if (j >= ds.cols()) throw ConfigError("knn: subset index out of range");
    if (seen[j]) throw ConfigError("knn: duplicate subset index");
    seen[j] = true;
  }
  if (targets.size() != rows_) throw ConfigError("knn: target length mismatch");
  for (int t : targets)
    if (t != 0 && t != 1) throw ConfigError("knn: targets must be in {0,1}");
  if (k_ < 1) throw ConfigError("knn: k must be >= 1");
  if (k_ > rows_ - 1)
    throw ConfigError("knn: k=" + std::to_string(k_) +
                      " exceeds available neighbors (rows-1=" +
                      std::to_string(rows_ - 1) + ")");
  targets_ = targets;
  const std::size_t d = subset_.size();
  train_.resize(rows_ * d);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t c = 0; c < d; ++c)
      train_[i * d + c] = ds.std_at(i, subset_[c]);
}

KnnModel::KnnModel(std::vector<double> train_matrix, std::size_t dim,
                   std::vector<int> targets, std::size_t k)
    : train_(std::move(train_matrix)), k_(k) {
  if (dim == 0) throw ConfigError("knn: empty feature subset");
  if (train_.empty() || train_.size() % dim != 0)
    throw ConfigError("knn: matrix size is not a multiple of dim");
  rows_ = train_.size() / dim;
  subset_.resize(dim);
  for (std::size_t c = 0; c < dim; ++c) subset_[c] = c;
  if (targets.size() != rows_) throw ConfigError("knn: target length mismatch");
  for (int t : targets)
    if (t != 0 && t != 1) throw ConfigError("knn: targets must be in {0,1}");
  if (k_ < 1) throw ConfigError("knn: k must be >= 1");
  if (k_ > rows_ - 1)
    throw ConfigError("knn: k=" + std::to_string(k_) +
                      " exceeds available neighbors (rows-1=" +
                      std::to_string(rows_ - 1) + ")");
  targets_ = std::move(targets);
}

double KnnModel::neighbor_mean(std::span<const double> subset_point,
                               std::size_t exclude_row) const {
  const std::size_t d = subset_.size();
  thread_local std::vector<std::pair<double, std::size_t>> dist;
  dist.clear();
  dist.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i == exclude_row) continue;
    double s = 0.0;
    const double* row = train_.data() + i * d;
    for (std::size_t c = 0; c < d; ++c) {
      const double t = row[c] - subset_point[c];
      s += t * t;
    }
    dist.emplace_back(s, i);
  }
  // ties broken by ascending row index via lexicographic pair order
  std::nth_element(dist.begin(), dist.begin() + (k_ - 1), dist.end());
  double sum = 0.0;
  for (std::size_t c = 0; c < k_; ++c) sum += targets_[dist[c].second];
  return sum / static_cast<double>(k_);
}

int KnnModel::predict_row(std::size_t query_index, bool leave_one_out) const {
  if (query_index >= rows_) throw ConfigError("knn: query index out of range");
  const std::size_t d = subset_.size();
  thread_local std::vector<double> q;
  q.assign(train_.begin() + query_index * d, train_.begin() + (query_index + 1) * d);
  const double mean =
      neighbor_mean(q, leave_one_out ? query_index : kNoExclude);
  return mean >= 0.5 ? 1 : 0;
}

int KnnModel::predict_point(std::span<const double> full_std_point) const {
  const std::size_t d = subset_.size();
  thread_local std::vector<double> q;
  q.resize(d);
  for (std::size_t c = 0; c < d; ++c) q[c] = full_std_point[subset_[c]];
  return neighbor_mean(q, kNoExclude) >= 0.5 ? 1 : 0;
}

}  // namespace axeval
