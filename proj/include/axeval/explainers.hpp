#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "axeval/dataset.hpp"
#include "axeval/explanation.hpp"
#include "axeval/model.hpp"

namespace axeval {

struct ExplainerConfig {
  std::string explainer_id = "grad";
  std::size_t sample_count = 1000;
  double noise_width = 0.5;  // standardized units
  std::size_t ig_steps = 50;
  enum class Baseline { kZeros, kDatasetMean };
  Baseline baseline = Baseline::kDatasetMean;
  std::uint64_t seed = 0;

  void validate() const;
};

extern const char* const kExplainerIds[7];
bool is_explainer_id(const std::string& id);

Explanation explain_grad(const Model& m, std::span<const double> x);
Explanation explain_input_x_grad(const Model& m, std::span<const double> x);
Explanation explain_smoothgrad(const Model& m, std::span<const double> x,
                               const ExplainerConfig& cfg);
Explanation explain_integrated_gradients(const Model& m,
                                         std::span<const double> x,
                                         const Dataset& ds,
                                         const ExplainerConfig& cfg);
/// Weighted least-squares surrogate fit over a Gaussian sample neighborhood;
/// the coefficients minimize the local fidelity loss the fit is scored by.
Explanation explain_lime(const Model& m, std::span<const double> x,
                         const Dataset& ds, const ExplainerConfig& cfg);

/// Weighted squared-error fidelity of a linear attribution on the same seeded
/// sample set explain_lime uses. The LIME fit is its exact minimizer.
double lime_fidelity_loss(const Model& m, std::span<const double> x,
                          const std::vector<double>& attribution,
                          const ExplainerConfig& cfg);
Explanation explain_kernelshap(const Model& m, std::span<const double> x,
                               const Dataset& ds, const ExplainerConfig& cfg);
Explanation explain_random(std::size_t n_features, const ExplainerConfig& cfg);

/// Dispatch by cfg.explainer_id for dataset row `index`, with the per-point
/// seed substream derived from (cfg.seed, index).
Explanation explain(const Model& m, const Dataset& ds, std::size_t index,
                    const ExplainerConfig& cfg);

}  // namespace axeval
