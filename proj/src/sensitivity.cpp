#include "axeval/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "axeval/errors.hpp"
#include "axeval/rng.hpp"

namespace axeval {

void PerturbationPlan::validate() const {
  if (n < 1) throw ConfigError("perturbation plan: n must be >= 1");
  if (!(width > 0.0)) throw ConfigError("perturbation plan: width must be positive");
  if (samples < 1) throw ConfigError("perturbation plan: samples must be >= 1");
}

namespace {

double prediction_gap(const Model& m, std::span<const double> x,
                      std::vector<std::size_t> subset,
                      const PerturbationPlan& plan) {
  // canonical coordinate order so the draw assignment depends only on the
  // subset as a set (pgu at n=N then matches pgi exactly)
  std::sort(subset.begin(), subset.end());
  Rng rng(plan.seed);
  const double fx = m.score(x);
  std::vector<double> p(x.begin(), x.end());
  double acc = 0.0;
  for (std::size_t s = 0; s < plan.samples; ++s) {
    for (std::size_t j : subset) p[j] = x[j] + rng.normal(0.0, plan.width);
    acc += std::abs(fx - m.score(p));
    for (std::size_t j : subset) p[j] = x[j];
  }
  return acc / static_cast<double>(plan.samples);
}

}  // namespace

double pgi(const Model& m, std::span<const double> x, const Explanation& e,
           const PerturbationPlan& plan) {
  plan.validate();
  if (plan.target != PerturbationPlan::Target::kImportant)
    throw ConfigError("pgi requires an important-feature plan");
  return prediction_gap(m, x, top_n_features(e, plan.n), plan);
}

double pgu(const Model& m, std::span<const double> x, const Explanation& e,
           const PerturbationPlan& plan) {
  plan.validate();
  if (plan.target != PerturbationPlan::Target::kUnimportant)
    throw ConfigError("pgu requires an unimportant-feature plan");
  return prediction_gap(m, x, bottom_n_features(e, plan.n), plan);
}

DensityModel::DensityModel(const Dataset& ds, const std::vector<int>* clusters)
    : dim_(ds.cols()) {
  const std::size_t nu = ds.rows();
  if (nu < 50) throw DataError("density estimation requires at least 50 rows");

  if (clusters) {
    if (clusters->size() != nu)
      throw ConfigError("cluster assignment length mismatch");
    const int n_comp = *std::max_element(clusters->begin(), clusters->end()) + 1;
    for (int c = 0; c < n_comp; ++c) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < nu; ++i)
        if ((*clusters)[i] == c) rows.push_back(i);
      if (rows.size() < dim_ + 1)
        throw DataError("cluster too small for covariance estimation");
      Component comp;
      comp.weight = static_cast<double>(rows.size()) / nu;
      comp.mean.assign(dim_, 0.0);
      for (std::size_t i : rows) {
        const auto x = ds.std_row(i);
        for (std::size_t j = 0; j < dim_; ++j) comp.mean[j] += x[j];
      }
      for (double& v : comp.mean) v /= static_cast<double>(rows.size());
      std::vector<double> cov(dim_ * dim_, 0.0);
      for (std::size_t i : rows) {
        const auto x = ds.std_row(i);
        for (std::size_t a = 0; a < dim_; ++a)
          for (std::size_t b = a; b < dim_; ++b)
            cov[a * dim_ + b] +=
                (x[a] - comp.mean[a]) * (x[b] - comp.mean[b]);
      }
      for (std::size_t a = 0; a < dim_; ++a)
        for (std::size_t b = a; b < dim_; ++b) {
          cov[a * dim_ + b] /= static_cast<double>(rows.size());
          cov[b * dim_ + a] = cov[a * dim_ + b];
        }
      for (std::size_t a = 0; a < dim_; ++a) cov[a * dim_ + a] += 1e-9;

      // Cholesky of covariance
      comp.chol.assign(dim_ * dim_, 0.0);
      for (std::size_t j = 0; j < dim_; ++j) {
        double diag = cov[j * dim_ + j];
        for (std::size_t k = 0; k < j; ++k)
          diag -= comp.chol[j * dim_ + k] * comp.chol[j * dim_ + k];
        if (!(diag > 0.0)) throw DataError("degenerate cluster covariance");
        comp.chol[j * dim_ + j] = std::sqrt(diag);
        for (std::size_t i = j + 1; i < dim_; ++i) {
          double s = cov[i * dim_ + j];
          for (std::size_t k = 0; k < j; ++k)
            s -= comp.chol[i * dim_ + k] * comp.chol[j * dim_ + k];
          comp.chol[i * dim_ + j] = s / comp.chol[j * dim_ + j];
        }
      }
      double logdet = 0.0;
      for (std::size_t j = 0; j < dim_; ++j)
        logdet += std::log(comp.chol[j * dim_ + j]);
      comp.log_norm = -0.5 * dim_ * std::log(2.0 * M_PI) - logdet;
      components_.push_back(std::move(comp));
    }
  } else {
    // Scott's rule on standardized columns
    const double factor =
        std::pow(static_cast<double>(nu), -1.0 / (static_cast<double>(dim_) + 4.0));
    kde_bandwidth_.assign(dim_, factor);  // column stddev is 1 after standardization
    kde_points_.reserve(nu * dim_);
    for (std::size_t i = 0; i < nu; ++i) {
      const auto x = ds.std_row(i);
      kde_points_.insert(kde_points_.end(), x.begin(), x.end());
    }
  }

  std::vector<double> dens(nu);
  for (std::size_t i = 0; i < nu; ++i) dens[i] = density(ds.std_row(i));
  std::sort(dens.begin(), dens.end());
  threshold_ = dens[nu / 100];
}

double DensityModel::density(std::span<const double> p) const {
  if (!components_.empty()) {
    double total = 0.0;
    std::vector<double> z(dim_);
    for (const auto& c : components_) {
      // solve L z = (p - mean), quadratic form = |z|^2
      for (std::size_t i = 0; i < dim_; ++i) {
        double s = p[i] - c.mean[i];
        for (std::size_t k = 0; k < i; ++k) s -= c.chol[i * dim_ + k] * z[k];
        z[i] = s / c.chol[i * dim_ + i];
      }
      double q = 0.0;
      for (double v : z) q += v * v;
      total += c.weight * std::exp(c.log_norm - 0.5 * q);
    }
    return total;
  }
  const std::size_t nu = kde_points_.size() / dim_;
  double total = 0.0;
  double log_norm = -0.5 * dim_ * std::log(2.0 * M_PI);
  for (std::size_t j = 0; j < dim_; ++j) log_norm -= std::log(kde_bandwidth_[j]);
  for (std::size_t i = 0; i < nu; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double t = (p[j] - kde_points_[i * dim_ + j]) / kde_bandwidth_[j];
      q += t * t;
    }
    total += std::exp(log_norm - 0.5 * q);
  }
  return total / static_cast<double>(nu);
}

double on_manifold_probability(const Dataset& ds, std::span<const double> x,
                               const std::vector<std::size_t>& subset,
                               double width, std::size_t samples,
                               std::uint64_t seed,
                               const std::vector<int>* clusters) {
  if (!(width > 0.0)) throw ConfigError("width must be positive");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  for (std::size_t j : subset)
    if (j >= ds.cols()) throw ConfigError("subset index out of range");
  DensityModel dm(ds, clusters);
  Rng rng(seed);
  std::vector<double> p(x.begin(), x.end());
  std::size_t on = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j : subset) p[j] = x[j] + rng.normal(0.0, width);
    if (dm.density(p) >= dm.manifold_threshold()) ++on;
    for (std::size_t j : subset) p[j] = x[j];
  }
  return static_cast<double>(on) / static_cast<double>(samples);
}

}  // namespace axeval
