#include "axeval/report.hpp"

#include "axeval/errors.hpp"

namespace axeval {

nlohmann::json QualityReport::to_json() const {
  nlohmann::json j;
  j["metric"] = metric_id;
  j["params"] = params;
  j["per_point"] = per_point_q;
  j["aggregate"] = aggregate_Q;
  if (auc_curve) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& [n, q] : *auc_curve) curve.push_back({n, q});
    j["curve"] = std::move(curve);
  }
  if (cache)
    j["cache"] = {{"hits", cache->hits},
                  {"misses", cache->misses},
                  {"size", cache->size}};
  return j;
}

QualityReport QualityReport::from_json(const nlohmann::json& j) {
  QualityReport r;
  try {
    r.metric_id = j.at("metric").get<std::string>();
    r.params = j.value("params", nlohmann::json::object());
    r.per_point_q = j.at("per_point").get<std::vector<double>>();
    r.aggregate_Q = j.at("aggregate").get<double>();
    if (j.contains("curve")) {
      std::vector<std::pair<std::size_t, double>> curve;
      for (const auto& p : j.at("curve"))
        curve.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<double>());
      r.auc_curve = std::move(curve);
    }
    if (j.contains("cache")) {
      CacheStats cs;
      cs.hits = j["cache"].at("hits").get<std::size_t>();
      cs.misses = j["cache"].at("misses").get<std::size_t>();
      cs.size = j["cache"].at("size").get<std::size_t>();
      r.cache = cs;
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed quality report: ") + e.what());
  }
  return r;
}

}  // namespace axeval
