#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace axeval {

/// Signed feature-importance vector for one datapoint of one model.
struct Explanation {
  std::vector<double> importances;
  std::size_t datapoint_index = 0;
  std::string explainer_id;
};

/// Indices of the n largest-|importance| features, descending by magnitude,
/// ties broken by ascending feature index.
std::vector<std::size_t> top_n_features(const Explanation& e, std::size_t n);

/// Indices of the n smallest-|importance| features (the "most unimportant"),
/// ascending by magnitude, ties broken by ascending feature index.
std::vector<std::size_t> bottom_n_features(const Explanation& e, std::size_t n);

/// Explanation-set CSV: header (datapoint_index, feature_1..feature_N), one
/// row per explanation.
void save_explanations(const std::vector<Explanation>& es,
                       const std::vector<std::string>& column_names,
                       const std::string& path);
std::vector<Explanation> load_explanations(const std::string& path,
                                           std::size_t expected_features);

}  // namespace axeval
