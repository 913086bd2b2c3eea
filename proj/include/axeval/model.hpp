#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "axeval/dataset.hpp"
#include "axeval/knn.hpp"

namespace axeval {

/// Binary classifier over standardized feature vectors. Hard label is
/// score >= 0.5, fixed.
class Model {
public:
  virtual ~Model() = default;
  virtual double score(std::span<const double> x) const = 0;
  int label(std::span<const double> x) const { return score(x) >= 0.5 ? 1 : 0; }
  virtual bool has_gradient() const { return false; }
  /// Gradient of score at x; throws CapabilityError when unavailable.
  virtual std::vector<double> gradient(std::span<const double> x) const;
};

using ModelPtr = std::shared_ptr<const Model>;

/// Ad-hoc model from callables; used for synthetic constructions and wrappers.
class FunctionModel : public Model {
public:
  using ScoreFn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<std::vector<double>(std::span<const double>)>;

  explicit FunctionModel(ScoreFn score, GradFn grad = nullptr)
      : score_(std::move(score)), grad_(std::move(grad)) {}

  double score(std::span<const double> x) const override { return score_(x); }
  bool has_gradient() const override { return grad_ != nullptr; }
  std::vector<double> gradient(std::span<const double> x) const override;

private:
  ScoreFn score_;
  GradFn grad_;
};

/// Logistic model: score = sigmoid(intercept + coefficients . x).
class LinearModel : public Model {
public:
  LinearModel(std::vector<double> coefficients, double intercept);

  double score(std::span<const double> x) const override;
  bool has_gradient() const override { return true; }
  std::vector<double> gradient(std::span<const double> x) const override;

  const std::vector<double>& coefficients() const { return coefficients_; }
  double intercept() const { return intercept_; }

private:
  std::vector<double> coefficients_;
  double intercept_;
};

/// One-hidden-layer MLP: sigmoid(w2 . tanh(W1 x + b1) + b2).
class MlpModel : public Model {
public:
  MlpModel(std::vector<double> w1, std::vector<double> b1,
           std::vector<double> w2, double b2, std::size_t n_in,
           std::size_t hidden);

  double score(std::span<const double> x) const override;
  bool has_gradient() const override { return true; }
  std::vector<double> gradient(std::span<const double> x) const override;

  std::size_t hidden() const { return hidden_; }
  const std::vector<double>& w1() const { return w1_; }
  const std::vector<double>& b1() const { return b1_; }
  const std::vector<double>& w2() const { return w2_; }
  double b2() const { return b2_; }

private:
  std::vector<double> w1_;  // hidden_ x n_in_, row-major
  std::vector<double> b1_;
  std::vector<double> w2_;
  double b2_;
  std::size_t n_in_;
  std::size_t hidden_;
};

enum class AttackTarget { kLime, kShap };

/// Adversarial scaffold: a real-vs-synthetic detector routes on-distribution
/// inputs to a biased single-feature model and detector-flagged synthetic
/// inputs to an innocuous one. No gradient.
class ScaffoldedModel : public Model {
public:
  struct BuildReport {
    double real_fidelity = 0.0;       // agreement with biased model on ds rows
    double synthetic_fidelity = 0.0;  // agreement with innocuous model on perturbed rows
  };

  double score(std::span<const double> x) const override;

  std::size_t protected_index() const { return protected_; }
  std::size_t foil_index() const { return foil_; }
  const BuildReport& build_report() const { return report_; }

  int biased_label(std::span<const double> x) const {
    return x[protected_] > protected_median_ ? 1 : 0;
  }
  int innocuous_label(std::span<const double> x) const {
    return x[foil_] > foil_median_ ? 1 : 0;
  }

  friend ModelPtr build_scaffold(const Dataset&, std::size_t, std::size_t,
                                 AttackTarget, double, std::uint64_t);

private:
  ScaffoldedModel(std::size_t protected_index, std::size_t foil_index,
                  double protected_median, double foil_median,
                  KnnModel detector, BuildReport report)
      : protected_(protected_index),
        foil_(foil_index),
        protected_median_(protected_median),
        foil_median_(foil_median),
        detector_(std::move(detector)),
        report_(report) {}

  std::size_t protected_;
  std::size_t foil_;
  double protected_median_;  // thresholds in standardized space
  double foil_median_;
  KnnModel detector_;  // k=5, all features; target 1 = real
  BuildReport report_;
};

/// L2-regularized logistic regression (strength 1e-4) by gradient descent to
/// gradient norm <= 1e-6 or 10k iterations, on standardized features.
std::shared_ptr<const LinearModel> fit_logistic(const Dataset& ds,
                                                const std::vector<int>& labels);

std::shared_ptr<const MlpModel> fit_mlp(const Dataset& ds,
                                        const std::vector<int>& labels,
                                        std::size_t hidden, std::uint64_t seed);

ModelPtr build_scaffold(const Dataset& ds, std::size_t protected_index,
                        std::size_t foil_index,
                        AttackTarget target = AttackTarget::kLime,
                        double perturb_width = 0.5, std::uint64_t seed = 0);

std::vector<double> model_gradient(const Model& m, std::span<const double> x);

/// JSON model persistence: {type, column_names, parameters, standardization}.
/// Parameter round-trips are bit-exact.
void save_model(const Model& m, const Dataset& ds, const std::string& path);
ModelPtr load_model(const std::string& path);

}  // namespace axeval
