#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "axeval/dataset.hpp"

namespace axeval {

/// Brute-force k-nearest-neighbor classifier over a feature subset of a
/// standardized dataset. Targets are binary model predictions. Distance is
/// Euclidean on the subset columns; ties broken by ascending row index;
/// neighbor-mean >= 0.5 predicts 1.
class KnnModel {
public:
  KnnModel(const Dataset& ds, const std::vector<int>& targets,
           std::vector<std::size_t> subset, std::size_t k);

  /// Fit over an explicit row-major matrix already in the desired coordinate
  /// space (used by the scaffold's real-vs-synthetic detector). The subset is
  /// the identity over all dim columns.
  KnnModel(std::vector<double> train_matrix, std::size_t dim,
           std::vector<int> targets, std::size_t k);

  /// Predict for a training row. With leave_one_out (the default) the query
  /// row is excluded from its own neighbor set.
  int predict_row(std::size_t query_index, bool leave_one_out = true) const;

  /// Predict for an arbitrary point given in standardized full-feature
  /// coordinates (only subset columns are used).
  int predict_point(std::span<const double> full_std_point) const;

  /// Mean of the k nearest targets for an arbitrary subset-coordinate point.
  double neighbor_mean(std::span<const double> subset_point,
                       std::size_t exclude_row) const;

  std::size_t k() const { return k_; }
  std::size_t train_rows() const { return rows_; }
  const std::vector<std::size_t>& subset() const { return subset_; }

private:
  static constexpr std::size_t kNoExclude = static_cast<std::size_t>(-1);

  std::vector<std::size_t> subset_;
  std::vector<double> train_;  // rows_ x subset_.size(), standardized
  std::vector<int> targets_;
  std::size_t rows_ = 0;
  std::size_t k_ = 0;
};

}  // namespace axeval
