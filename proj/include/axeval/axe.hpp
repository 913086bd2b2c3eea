#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "axeval/dataset.hpp"
#include "axeval/explanation.hpp"
#include "axeval/knn.hpp"

namespace axeval {

struct EvalConfig {
  std::size_t top_n = 1;
  std::size_t k_neighbors = 5;
  double perturb_width = 0.5;  // standardized units
  std::size_t perturb_samples = 1000;
  std::uint64_t seed = 0;
  bool aggregate_auc = false;
  bool leave_one_out = true;  // self-exclusion at k-NN query time

  void validate() const;
};

struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t size = 0;
};

/// Mean via fixed pairwise-summation reduction order, independent of any
/// evaluation scheduling.
double pairwise_mean(const std::vector<double>& v);

/// One AXE evaluation: per-datapoint k-NN recovery of the model's own
/// predictions over each explanation's top-n feature subset, with fitted
/// models cached by sorted subset.
class AxeRun {
public:
  AxeRun(const Dataset& ds, std::vector<int> y_preds,
         std::vector<Explanation> explanations, EvalConfig config);

  /// Accuracy over all datapoints; per-point hits retained. Deterministic
  /// for any jobs count.
  double score(std::size_t jobs = 1);

  const std::vector<double>& per_point() const { return per_point_; }
  CacheStats cache_stats() const { return stats_; }
  const EvalConfig& config() const { return config_; }

private:
  const KnnModel& fetch(const std::vector<std::size_t>& sorted_subset);

  const Dataset& ds_;
  std::vector<int> y_preds_;
  std::vector<Explanation> explanations_;
  EvalConfig config_;
  std::map<std::vector<std::size_t>, KnnModel> cache_;
  CacheStats stats_;
  std::vector<double> per_point_;
};

struct AxeAucResult {
  double auc = 0.0;
  std::vector<std::pair<std::size_t, double>> curve;  // (n, AXE_n)
};

/// AXE_n for every n in 1..N; auc is the arithmetic mean over the curve.
AxeAucResult axe_auc(const Dataset& ds, const std::vector<int>& y_preds,
                     const std::vector<Explanation>& explanations,
                     std::size_t k, bool leave_one_out = true,
                     std::size_t jobs = 1);

}  // namespace axeval
