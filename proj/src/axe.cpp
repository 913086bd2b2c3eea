#include "axeval/axe.hpp"

#include <algorithm>
#include <thread>

#include "axeval/errors.hpp"

namespace axeval {

void EvalConfig::validate() const {
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
  if (k_neighbors < 1) throw ConfigError("k_neighbors must be >= 1");
  if (!(perturb_width > 0.0)) throw ConfigError("perturb_width must be positive");
  if (perturb_samples < 1) throw ConfigError("perturb_samples must be >= 1");
}

double pairwise_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  // recursive halving gives a fixed reduction tree
  struct Sum {
    static double run(const double* p, std::size_t n) {
      if (n == 1) return p[0];
      const std::size_t half = n / 2;
      return run(p, half) + run(p + half, n - half);
    }
  };
  return Sum::run(v.data(), v.size()) / static_cast<double>(v.size());
}

AxeRun::AxeRun(const Dataset& ds, std::vector<int> y_preds,
               std::vector<Explanation> explanations, EvalConfig config)
    : ds_(ds),
      y_preds_(std::move(y_preds)),
      explanations_(std::move(explanations)),
      config_(config) {
  config_.validate();
  if (config_.top_n > ds_.cols())
    throw ConfigError("top_n exceeds feature count");
  if (y_preds_.size() != ds_.rows())
    throw ConfigError("y_preds length does not match dataset rows");
  if (explanations_.size() != ds_.rows())
    throw ConfigError("one explanation per dataset row is required");
  if (config_.k_neighbors > ds_.rows() - 1)
    throw ConfigError("k_neighbors exceeds available neighbors (rows-1)");
  for (int y : y_preds_)
    if (y != 0 && y != 1) throw ConfigError("y_preds must be in {0,1}");
}

const KnnModel& AxeRun::fetch(const std::vector<std::size_t>& sorted_subset) {
  auto it = cache_.find(sorted_subset);
  if (it != cache_.end()) {
    ++stats_.hits;
    return it->second;
  }
  ++stats_.misses;
  auto [pos, inserted] = cache_.emplace(
      sorted_subset,
      KnnModel(ds_, y_preds_, sorted_subset, config_.k_neighbors));
  (void)inserted;
  stats_.size = cache_.size();
  return pos->second;
}

double AxeRun::score(std::size_t jobs) {
  const std::size_t nu = ds_.rows();
  per_point_.assign(nu, 0.0);

  // resolve subsets and populate the cache single-threaded; queries then run
  // concurrently against immutable models
  std::vector<const KnnModel*> models(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    auto subset = top_n_features(explanations_[i], config_.top_n);
    std::sort(subset.begin(), subset.end());
    models[i] = &fetch(subset);
  }

  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const int pred = models[i]->predict_row(i, config_.leave_one_out);
      per_point_[i] = pred == y_preds_[i] ? 1.0 : 0.0;
    }
  };
  if (jobs <= 1) {
    work(0, nu);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (nu + jobs - 1) / jobs;
    for (std::size_t t = 0; t < jobs; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(nu, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return pairwise_mean(per_point_);
}

AxeAucResult axe_auc(const Dataset& ds, const std::vector<int>& y_preds,
                     const std::vector<Explanation>& explanations,
                     std::size_t k, bool leave_one_out, std::size_t jobs) {
  AxeAucResult out;
  std::vector<double> values;
  for (std::size_t n = 1; n <= ds.cols(); ++n) {
    EvalConfig cfg;
    cfg.top_n = n;
    cfg.k_neighbors = k;
    cfg.leave_one_out = leave_one_out;
    AxeRun run(ds, y_preds, explanations, cfg);
    const double v = run.score(jobs);
    out.curve.emplace_back(n, v);
    values.push_back(v);
  }
  out.auc = pairwise_mean(values);
  return out;
}

}  // namespace axeval
