#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "axeval/dataset.hpp"
#include "axeval/model.hpp"

namespace axeval {

// ---------------------------------------------------------------------------
// Region heatmaps: two-feature ground-truth metrics over an explanation grid.

struct RegionHeatmaps {
  std::size_t resolution = 0;
  // metric id -> row-major resolution x resolution grid, cell centers over
  // (-1,1) x (-1,1); grids[m][r*resolution+c] with i1 along columns
  std::map<std::string, std::vector<double>> grids;
};

RegionHeatmaps run_region_heatmaps(std::pair<double, double> beta,
                                   std::size_t grid_resolution);

// ---------------------------------------------------------------------------
// Synthetic four-cluster study.

struct FourGaussianSpec {
  // cluster centers fixed at (2,2), (-2,2), (-2,-2), (2,-2)
  double cluster_stddev = 0.8;
  std::size_t points_per_cluster = 5000;
  std::uint64_t seed = 0;
};

struct FourGaussianData {
  Dataset dataset;
  std::vector<int> clusters;       // 0..3 per row
  ModelPtr model;                  // 1 iff raw X1 > 0
  std::vector<double> query_std;   // standardized coordinates of (2,2)
};

FourGaussianData make_four_gaussian(const FourGaussianSpec& spec);

struct SyntheticStudyResult {
  std::vector<std::size_t> k_grid;
  std::vector<double> axe_ea;  // AXE_{n=1}(e_a) per k
  std::vector<double> axe_eb;
  std::vector<double> width_grid;
  std::vector<double> pgi_ea;  // at the cluster-center query point, per width
  std::vector<double> pgi_eb;
  std::vector<double> on_manifold;  // P(perturbation stays on manifold) per width
};

SyntheticStudyResult run_synthetic_study(const FourGaussianSpec& spec,
                                         const std::vector<std::size_t>& k_grid,
                                         const std::vector<double>& width_grid,
                                         std::size_t jobs = 1);

std::vector<double> default_width_grid();  // symlog 1e-3 .. 1e2

// ---------------------------------------------------------------------------
// Fairwashing detection.

struct FairwashSpec {
  std::string dataset_path;  // ignored when dataset is provided in memory
  std::string protected_feature;
  std::string foil1;
  std::optional<std::string> foil2;
  AttackTarget attack = AttackTarget::kLime;
  double perturb_width = 0.5;
  std::size_t perturb_samples = 1000;
  std::uint64_t seed = 0;
};

struct FairwashRow {
  std::string metric;  // "axe", "pgi", "neg_pgu"
  double e_rho = 0.0;
  double e_phi = 0.0;
  double e_psi = 0.0;  // NaN when no second foil
  double e_omega = 0.0;
  bool pass = false;  // e_rho strictly above both foils
};

struct FairwashResult {
  std::string dataset_name;
  std::string model_name;  // "m_L" or "m_S"
  std::vector<FairwashRow> rows;
  double detector_real_fidelity = 0.0;
  double detector_synthetic_fidelity = 0.0;
};

FairwashResult run_fairwash(const Dataset& ds, const FairwashSpec& spec,
                            const std::string& dataset_name,
                            std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Multi-explainer benchmark.

struct BenchmarkSpec {
  struct DatasetEntry {
    std::string name;
    std::string path;  // CSV with target column
  };
  std::vector<DatasetEntry> datasets;
  std::vector<std::string> models;      // "logistic", "mlp"
  std::vector<std::string> explainers;  // explainer ids
  std::vector<std::size_t> axe_k = {1, 3, 5, 9};
  std::size_t sample_count = 1000;
  double noise_width = 0.5;
  std::uint64_t seed = 0;
};

struct BenchmarkCell {
  std::string dataset;
  std::string model;
  std::string metric;
  std::string explainer;
  double value = 0.0;    // AUC-aggregated raw value
  double z_score = 0.0;  // standardized across explainers within the cell
};

struct BenchmarkResult {
  std::vector<BenchmarkCell> cells;
  bool gt_on_standardized = true;  // LR ground truth taken on standardized features
};

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Bundled synthetic stand-in generation (schema-shaped substitutes for the
// real tabular datasets). Features are noisy mixes of two latent factors so
// off-manifold perturbations are detectable; target is a thresholded noisy
// linear rule.
Dataset make_standin_dataset(std::size_t rows, std::size_t features,
                             std::uint64_t seed);

// CSV/plot-data emission (fig3_*.csv, fig5.csv, fig6.csv, fig7_*.csv,
// fig8_*.csv, table2.csv)
void write_region_heatmaps(const RegionHeatmaps& r, const std::string& out_dir);
void write_synthetic_study(const SyntheticStudyResult& r,
                           const std::string& out_dir);
void write_fairwash_table(const std::vector<FairwashResult>& results,
                          const std::string& out_dir);
void write_benchmark(const BenchmarkResult& r, const std::string& out_dir);

}  // namespace axeval
