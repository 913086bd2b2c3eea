#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "axeval/axe.hpp"

namespace axeval {

/// Per-metric evaluation result for one (metric, explainer, model, dataset)
/// combination. aggregate_Q is always the pairwise mean of per_point_q.
struct QualityReport {
  std::string metric_id;
  nlohmann::json params;  // fully resolved configuration, defaults included
  std::vector<double> per_point_q;
  double aggregate_Q = 0.0;
  std::optional<std::vector<std::pair<std::size_t, double>>> auc_curve;
  std::optional<CacheStats> cache;

  nlohmann::json to_json() const;
  static QualityReport from_json(const nlohmann::json& j);
};

}  // namespace axeval
