#include "axeval/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "axeval/errors.hpp"

namespace axeval {

Dataset::Dataset(std::vector<double> features, std::size_t n_features,
                 std::vector<std::string> column_names,
                 std::optional<std::vector<int>> labels)
    : n_features_(n_features),
      column_names_(std::move(column_names)),
      raw_(std::move(features)),
      labels_(std::move(labels)) {
  if (n_features_ == 0) throw DataError("dataset has no feature columns");
  if (raw_.empty() || raw_.size() % n_features_ != 0)
    throw DataError("feature matrix size is not a multiple of column count");
  nu_ = raw_.size() / n_features_;
  if (column_names_.size() != n_features_)
    throw DataError("column name count does not match feature count");
  if (labels_) {
    if (labels_->size() != nu_) throw DataError("label count does not match row count");
    for (int y : *labels_)
      if (y != 0 && y != 1) throw DataError("labels must be in {0,1}");
  }
  for (double v : raw_)
    if (!std::isfinite(v)) throw DataError("non-finite value in feature matrix");

  mean_.assign(n_features_, 0.0);
  stddev_.assign(n_features_, 0.0);
  constant_.assign(n_features_, false);
  for (std::size_t j = 0; j < n_features_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < nu_; ++i) s += raw_[i * n_features_ + j];
    mean_[j] = s / static_cast<double>(nu_);
    double ss = 0.0;
    for (std::size_t i = 0; i < nu_; ++i) {
      const double d = raw_[i * n_features_ + j] - mean_[j];
      ss += d * d;
    }
    // population convention
    stddev_[j] = std::sqrt(ss / static_cast<double>(nu_));
    if (stddev_[j] <= 0.0) {
      constant_[j] = true;
      stddev_[j] = 1.0;
    }
  }
  std_.resize(raw_.size());
  for (std::size_t i = 0; i < nu_; ++i)
    for (std::size_t j = 0; j < n_features_; ++j)
      std_[i * n_features_ + j] =
          (raw_[i * n_features_ + j] - mean_[j]) / stddev_[j];
}

std::vector<double> Dataset::std_mean() const {
  std::vector<double> m(n_features_, 0.0);
  for (std::size_t j = 0; j < n_features_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < nu_; ++i) s += std_[i * n_features_ + j];
    m[j] = s / static_cast<double>(nu_);
  }
  return m;
}

std::size_t Dataset::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < n_features_; ++j)
    if (column_names_[j] == name) return j;
  throw ConfigError("unknown feature name: " + name);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Dataset Dataset::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path);
  const auto header = split_csv_line(line);

  std::size_t target_col = header.size();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "target") {
      if (target_col != header.size())
        throw DataError("duplicate target column in " + path);
      target_col = j;
    } else {
      names.push_back(header[j]);
    }
  }
  if (names.empty()) throw DataError("no feature columns in " + path);

  std::vector<double> features;
  std::vector<int> labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(lineno) + " in " + path +
                      " has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v;
      try {
        std::size_t pos = 0;
        v = std::stod(cells[j], &pos);
        if (pos != cells[j].size()) throw std::invalid_argument(cells[j]);
      } catch (const std::exception&) {
        throw DataError("non-numeric cell '" + cells[j] + "' at row " +
                        std::to_string(lineno) + " in " + path);
      }
      if (j == target_col) {
        if (v != 0.0 && v != 1.0)
          throw DataError("target value must be 0 or 1 at row " +
                          std::to_string(lineno) + " in " + path);
        labels.push_back(static_cast<int>(v));
      } else {
        features.push_back(v);
      }
    }
  }
  if (features.empty()) throw DataError("dataset has no rows: " + path);

  std::optional<std::vector<int>> maybe_labels;
  if (target_col != header.size()) maybe_labels = std::move(labels);
  const std::size_t n_features = names.size();
  return Dataset(std::move(features), n_features, std::move(names),
                 std::move(maybe_labels));
}

}  // namespace axeval
