#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace axeval {

/// Immutable tabular dataset: nu rows by n_features numeric columns plus an
/// optional {0,1} target. Per-column mean/stddev (population convention) are
/// computed at construction; constant columns are flagged and assigned
/// stddev 1 so distances stay finite.
class Dataset {
public:
  Dataset(std::vector<double> features, std::size_t n_features,
          std::vector<std::string> column_names,
          std::optional<std::vector<int>> labels = std::nullopt);

  // CSV: header row mandatory; optional column named "target" holds {0,1}
  // labels; all other columns numeric.
  static Dataset load_csv(const std::string& path);

  std::size_t rows() const { return nu_; }
  std::size_t cols() const { return n_features_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }

  std::span<const double> raw_row(std::size_t i) const {
    return {raw_.data() + i * n_features_, n_features_};
  }
  std::span<const double> std_row(std::size_t i) const {
    return {std_.data() + i * n_features_, n_features_};
  }
  double std_at(std::size_t i, std::size_t j) const {
    return std_[i * n_features_ + j];
  }

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }
  const std::vector<bool>& constant_columns() const { return constant_; }

  /// Mean of standardized columns (zero for non-constant columns).
  std::vector<double> std_mean() const;

  std::size_t column_index(const std::string& name) const;  // throws ConfigError

private:
  std::size_t nu_ = 0;
  std::size_t n_features_ = 0;
  std::vector<std::string> column_names_;
  std::vector<double> raw_;
  std::vector<double> std_;
  std::optional<std::vector<int>> labels_;
  std::vector<double> mean_;
  std::vector<double> stddev_;
  std::vector<bool> constant_;
};

}  // namespace axeval
