#pragma once

#include <string>

#include <json.hpp>

namespace axeval {

// Config-driven entry points behind the C API and CLI. Each takes a fully
// resolved JSON config (defaults materialized by the caller or here) and
// writes its reports under the configured output directory.

/// evaluate: {data, model, explainer, metrics:[...], n (int or "auc"), k,
/// width, samples, seed, jobs, out}. Returns the combined report document.
nlohmann::json run_evaluate_config(const nlohmann::json& cfg);

/// synthetic study: {points_per_cluster, stddev, seed, k_grid, width_grid,
/// jobs, out}. Emits fig5.csv and fig6.csv.
nlohmann::json run_synthetic_config(const nlohmann::json& cfg);

/// fairwash: {data, dataset_name, protected, foil1, foil2?, attack, width,
/// samples, seed, jobs, out}. Emits table2.csv; returns the ordering table.
nlohmann::json run_fairwash_config(const nlohmann::json& cfg);

/// benchmark: {manifest, seed, sample_count, noise_width, jobs, out}. Emits
/// per-(dataset, model) CSVs plus results.json.
nlohmann::json run_benchmark_config(const nlohmann::json& cfg);

}  // namespace axeval
