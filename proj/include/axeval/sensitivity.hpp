#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "axeval/dataset.hpp"
#include "axeval/explanation.hpp"
#include "axeval/model.hpp"

namespace axeval {

struct PerturbationPlan {
  enum class Target { kImportant, kUnimportant };
  Target target = Target::kImportant;
  std::size_t n = 1;
  double width = 0.5;  // Gaussian stddev, standardized units
  std::size_t samples = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Prediction gap on important features: mean |score(x) - score(x~)| over
/// Gaussian perturbations of the top-n coordinates of e.
double pgi(const Model& m, std::span<const double> x, const Explanation& e,
           const PerturbationPlan& plan);

/// Prediction gap on unimportant features: same, perturbing the n
/// smallest-|importance| coordinates. Lower is better.
double pgu(const Model& m, std::span<const double> x, const Explanation& e,
           const PerturbationPlan& plan);

/// Density model over standardized feature space: a Gaussian mixture with one
/// component per known cluster, or a Gaussian-product KDE with Scott's-rule
/// bandwidth when clusters are unknown.
class DensityModel {
public:
  DensityModel(const Dataset& ds, const std::vector<int>* clusters = nullptr);

  double density(std::span<const double> std_point) const;
  /// Density value exceeded by 99% of the dataset's own rows.
  double manifold_threshold() const { return threshold_; }

private:
  struct Component {
    double weight;
    std::vector<double> mean;
    std::vector<double> chol;  // Cholesky factor of covariance, d x d
    double log_norm;
  };
  std::size_t dim_;
  std::vector<Component> components_;  // empty => KDE
  std::vector<double> kde_points_;
  std::vector<double> kde_bandwidth_;
  double threshold_ = 0.0;
};

/// Fraction of Gaussian perturbations of the subset coordinates of x that
/// stay above the 99% density threshold of the dataset.
double on_manifold_probability(const Dataset& ds, std::span<const double> x,
                               const std::vector<std::size_t>& subset,
                               double width, std::size_t samples,
                               std::uint64_t seed,
                               const std::vector<int>* clusters = nullptr);

}  // namespace axeval
