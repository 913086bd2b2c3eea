#include "axeval/explainers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "axeval/errors.hpp"
#include "axeval/linalg.hpp"
#include "axeval/rng.hpp"

namespace axeval {

const char* const kExplainerIds[7] = {
    "grad", "input_x_grad", "smoothgrad", "integrated_gradients",
    "lime", "kernelshap", "random"};

bool is_explainer_id(const std::string& id) {
  for (const char* known : kExplainerIds)
    if (id == known) return true;
  return false;
}

void ExplainerConfig::validate() const {
  if (!is_explainer_id(explainer_id))
    throw ConfigError("unknown explainer id: " + explainer_id);
  if (sample_count < 1) throw ConfigError("sample_count must be >= 1");
  if (!(noise_width > 0.0)) throw ConfigError("noise_width must be positive");
  if (ig_steps < 1) throw ConfigError("ig_steps must be >= 1");
}

namespace {

std::vector<double> baseline_point(const Dataset& ds,
                                   const ExplainerConfig& cfg) {
  if (cfg.baseline == ExplainerConfig::Baseline::kZeros)
    return std::vector<double>(ds.cols(), 0.0);
  return ds.std_mean();
}

double binom(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r *= static_cast<double>(n - i + 1) / static_cast<double>(i);
  return r;
}

}  // namespace

Explanation explain_grad(const Model& m, std::span<const double> x) {
  Explanation e;
  e.importances = m.gradient(x);
  e.explainer_id = "grad";
  return e;
}

Explanation explain_input_x_grad(const Model& m, std::span<const double> x) {
  Explanation e;
  e.importances = m.gradient(x);
  for (std::size_t j = 0; j < e.importances.size(); ++j) e.importances[j] *= x[j];
  e.explainer_id = "input_x_grad";
  return e;
}

Explanation explain_smoothgrad(const Model& m, std::span<const double> x,
                               const ExplainerConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  Rng rng(cfg.seed);
  std::vector<double> acc(n, 0.0), p(n);
  for (std::size_t s = 0; s < cfg.sample_count; ++s) {
    for (std::size_t j = 0; j < n; ++j)
      p[j] = x[j] + rng.normal(0.0, cfg.noise_width);
    const auto g = m.gradient(p);
    for (std::size_t j = 0; j < n; ++j) acc[j] += g[j];
  }
  for (double& v : acc) v /= static_cast<double>(cfg.sample_count);
  Explanation e;
  e.importances = std::move(acc);
  e.explainer_id = "smoothgrad";
  return e;
}

Explanation explain_integrated_gradients(const Model& m,
                                         std::span<const double> x,
                                         const Dataset& ds,
                                         const ExplainerConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  const auto b = baseline_point(ds, cfg);
  std::vector<double> acc(n, 0.0), p(n);
  for (std::size_t t = 0; t < cfg.ig_steps; ++t) {
    const double alpha = (static_cast<double>(t) + 0.5) /
                         static_cast<double>(cfg.ig_steps);
    for (std::size_t j = 0; j < n; ++j) p[j] = b[j] + alpha * (x[j] - b[j]);
    const auto g = m.gradient(p);
    for (std::size_t j = 0; j < n; ++j) acc[j] += g[j];
  }
  Explanation e;
  e.importances.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    e.importances[j] =
        (x[j] - b[j]) * acc[j] / static_cast<double>(cfg.ig_steps);
  e.explainer_id = "integrated_gradients";
  return e;
}

namespace {

// Shared LIME sample set: local offsets, score differences from the anchor
// point, and Gaussian kernel weights.
void lime_samples(const Model& m, std::span<const double> x,
                  const ExplainerConfig& cfg, std::vector<double>& design,
                  std::vector<double>& y, std::vector<double>& w) {
  const std::size_t n = x.size();
  const std::size_t rows = cfg.sample_count;
  design.resize(rows * n);
  y.resize(rows);
  w.resize(rows);
  std::vector<double> p(n);
  Rng rng(cfg.seed);
  const double fx = m.score(x);
  const double two_w2 = 2.0 * cfg.noise_width * cfg.noise_width;
  for (std::size_t s = 0; s < rows; ++s) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = rng.normal(0.0, cfg.noise_width);
      design[s * n + j] = delta;
      p[j] = x[j] + delta;
      dist2 += delta * delta;
    }
    y[s] = m.score(p) - fx;
    w[s] = std::exp(-dist2 / two_w2);
  }
}

}  // namespace

Explanation explain_lime(const Model& m, std::span<const double> x,
                         const Dataset& ds, const ExplainerConfig& cfg) {
  cfg.validate();
  (void)ds;
  std::vector<double> design, y, w;
  lime_samples(m, x, cfg, design, y, w);
  std::vector<double> coef;
  if (weighted_least_squares(design, y, w, cfg.sample_count, x.size(), 1e-6,
                             coef))
    std::fprintf(stderr, "lime: singular design matrix, ridge fallback applied\n");
  Explanation e;
  e.importances = std::move(coef);
  e.explainer_id = "lime";
  return e;
}

double lime_fidelity_loss(const Model& m, std::span<const double> x,
                          const std::vector<double>& attribution,
                          const ExplainerConfig& cfg) {
  cfg.validate();
  if (attribution.size() != x.size())
    throw ConfigError("attribution length does not match feature count");
  std::vector<double> design, y, w;
  lime_samples(m, x, cfg, design, y, w);
  const std::size_t n = x.size();
  double loss = 0.0;
  for (std::size_t s = 0; s < cfg.sample_count; ++s) {
    double pred = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      pred += attribution[j] * design[s * n + j];
    const double r = y[s] - pred;
    loss += w[s] * r * r;
  }
  return loss;
}

Explanation explain_kernelshap(const Model& m, std::span<const double> x,
                               const Dataset& ds, const ExplainerConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  const auto bg = ds.std_mean();
  std::vector<double> hybrid(n);
  auto value = [&](const std::vector<int>& z) {
    for (std::size_t j = 0; j < n; ++j) hybrid[j] = z[j] ? x[j] : bg[j];
    return m.score(hybrid);
  };
  const double v0 = m.score(bg);
  const double v1 = m.score(x);
  const double delta = v1 - v0;

  Explanation e;
  e.explainer_id = "kernelshap";
  if (n == 1) {
    e.importances = {delta};
    return e;
  }

  const bool enumerate =
      n <= 20 && (std::uint64_t{1} << n) - 2 <= cfg.sample_count;
  std::vector<std::vector<int>> coalitions;
  std::vector<double> weights;
  if (enumerate) {
    const std::uint64_t total = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
      std::vector<int> z(n, 0);
      std::size_t sz = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (mask & (std::uint64_t{1} << j)) {
          z[j] = 1;
          ++sz;
        }
      coalitions.push_back(std::move(z));
      weights.push_back(static_cast<double>(n - 1) /
                        (binom(n, sz) * sz * (n - sz)));
    }
  } else {
    // sample coalition sizes proportional to the aggregated Shapley kernel
    // mass (N-1)/(s(N-s)); subsets uniform within a size, weight then uniform
    std::vector<double> size_cdf(n - 1);
    double acc = 0.0;
    for (std::size_t s = 1; s < n; ++s) {
      acc += 1.0 / (static_cast<double>(s) * static_cast<double>(n - s));
      size_cdf[s - 1] = acc;
    }
    Rng rng(cfg.seed);
    std::vector<std::size_t> idx(n);
    for (std::size_t s = 0; s < cfg.sample_count; ++s) {
      const double u = rng.uniform01() * acc;
      std::size_t sz = 1;
      while (sz < n - 1 && size_cdf[sz - 1] < u) ++sz;
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t j = 0; j < sz; ++j)
        std::swap(idx[j], idx[j + rng.below(n - j)]);
      std::vector<int> z(n, 0);
      for (std::size_t j = 0; j < sz; ++j) z[idx[j]] = 1;
      coalitions.push_back(std::move(z));
      weights.push_back(1.0);
    }
  }

  // efficiency constraint folded in: phi_n = delta - sum(phi_1..n-1)
  const std::size_t rows = coalitions.size();
  const std::size_t d = n - 1;
  std::vector<double> design(rows * d), y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& z = coalitions[r];
    for (std::size_t j = 0; j < d; ++j)
      design[r * d + j] = static_cast<double>(z[j] - z[n - 1]);
    y[r] = value(z) - v0 - z[n - 1] * delta;
  }
  std::vector<double> coef;
  if (weighted_least_squares(design, y, weights, rows, d, 1e-6, coef))
    std::fprintf(stderr,
                 "kernelshap: singular system, ridge fallback applied\n");
  e.importances.assign(coef.begin(), coef.end());
  double sum = 0.0;
  for (double c : coef) sum += c;
  e.importances.push_back(delta - sum);
  return e;
}

Explanation explain_random(std::size_t n_features, const ExplainerConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Explanation e;
  e.importances.resize(n_features);
  for (double& v : e.importances) v = rng.uniform(-1.0, 1.0);
  e.explainer_id = "random";
  return e;
}

Explanation explain(const Model& m, const Dataset& ds, std::size_t index,
                    const ExplainerConfig& cfg) {
  cfg.validate();
  if (index >= ds.rows()) throw ConfigError("datapoint index out of range");
  ExplainerConfig sub = cfg;
  sub.seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  const auto x = ds.std_row(index);
  Explanation e;
  if (cfg.explainer_id == "grad") e = explain_grad(m, x);
  else if (cfg.explainer_id == "input_x_grad") e = explain_input_x_grad(m, x);
  else if (cfg.explainer_id == "smoothgrad") e = explain_smoothgrad(m, x, sub);
  else if (cfg.explainer_id == "integrated_gradients")
    e = explain_integrated_gradients(m, x, ds, sub);
  else if (cfg.explainer_id == "lime") e = explain_lime(m, x, ds, sub);
  else if (cfg.explainer_id == "kernelshap") e = explain_kernelshap(m, x, ds, sub);
  else e = explain_random(ds.cols(), sub);
  e.datapoint_index = index;
  return e;
}

}  // namespace axeval
