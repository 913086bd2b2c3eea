// Command-line front end. Builds a JSON run configuration from flags and
// drives the shared library through its C interface.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "axeval/axe_eval.h"

namespace {

using nlohmann::json;

int status_to_exit(axev_status s) {
  switch (s) {
    case AXEV_OK:
      return 0;
    case AXEV_ERR_CONFIG:
    case AXEV_ERR_CAPABILITY:
      return 2;
    default:
      return 3;  // data errors and unexpected failures
  }
}

int run(axev_status (*fn)(const char*, char**), const json& cfg, bool quiet) {
  char* result = nullptr;
  const axev_status s = fn(cfg.dump().c_str(), &result);
  if (s != AXEV_OK) {
    std::fprintf(stderr, "error: %s\n", axev_last_error());
    return status_to_exit(s);
  }
  if (!quiet) std::fputs(result, stdout);
  axev_string_free(result);
  return 0;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AXE_EVAL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::fprintf(stderr, "warning: ignoring non-numeric AXE_EVAL_SEED\n");
    }
  }
  return 0;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-explanation quality evaluation toolkit"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress the JSON result on stdout");

  // evaluate
  auto* ev = app.add_subcommand(
      "evaluate", "score one explainer on one dataset/model with chosen metrics");
  std::string ev_data, ev_model, ev_explainer, ev_metric, ev_n = "auc", ev_out;
  std::uint64_t ev_k = 5, ev_samples = 1000, ev_jobs = 1;
  std::uint64_t ev_seed = default_seed();
  double ev_width = 0.5;
  bool ev_no_loo = false;
  ev->add_option("--data", ev_data, "dataset CSV path")->required();
  ev->add_option("--model", ev_model,
                 "model JSON path, or builtin 'logistic'/'mlp' fit on the "
                 "dataset's target column")
      ->required();
  ev->add_option("--explainer", ev_explainer,
                 "explainer id (grad, input_x_grad, smoothgrad, "
                 "integrated_gradients, lime, kernelshap, random) or an "
                 "explanation-set CSV path")
      ->required();
  ev->add_option("--metric", ev_metric,
                 "comma-separated metric ids (axe, pgi, pgu, fa, ra, sa, sra, "
                 "rc, pra)")
      ->required();
  ev->add_option("--n", ev_n, "top-n size, or 'auc' to sweep n=1..N");
  ev->add_option("--k", ev_k, "neighbor count for axe");
  ev->add_option("--width", ev_width, "perturbation / sampling width");
  ev->add_option("--samples", ev_samples, "Monte-Carlo sample count");
  ev->add_option("--seed", ev_seed, "random seed (env AXE_EVAL_SEED fallback)");
  ev->add_option("--jobs", ev_jobs, "worker threads; output is jobs-invariant");
  ev->add_flag("--no-leave-one-out", ev_no_loo,
               "keep the query row in its own neighbor set");
  ev->add_option("--out", ev_out, "report output directory")->required();

  // synthetic
  auto* sy = app.add_subcommand(
      "synthetic", "four-cluster study: neighbor-recovery vs perturbation metrics");
  std::uint64_t sy_points = 5000, sy_jobs = 1;
  std::uint64_t sy_seed = default_seed();
  double sy_stddev = 0.8;
  std::vector<std::uint64_t> sy_k;
  std::vector<double> sy_widths;
  std::string sy_out;
  sy->add_option("--points-per-cluster", sy_points, "rows per cluster");
  sy->add_option("--stddev", sy_stddev, "cluster standard deviation");
  sy->add_option("--k", sy_k, "neighbor-count grid (default 1 5 50 500 5000)");
  sy->add_option("--width", sy_widths, "perturbation width grid");
  sy->add_option("--seed", sy_seed, "random seed (env AXE_EVAL_SEED fallback)");
  sy->add_option("--jobs", sy_jobs, "worker threads");
  sy->add_option("--out", sy_out, "output directory")->required();

  // fairwash
  auto* fw = app.add_subcommand(
      "fairwash", "audit a scaffolded model for hidden reliance on a feature");
  std::string fw_data, fw_name, fw_protected, fw_foil1, fw_foil2, fw_attack = "lime",
              fw_out;
  std::uint64_t fw_samples = 1000, fw_jobs = 1;
  std::uint64_t fw_seed = default_seed();
  double fw_width = 0.5;
  fw->add_option("--data", fw_data, "dataset CSV path")->required();
  fw->add_option("--name", fw_name, "dataset name for the report");
  fw->add_option("--protected", fw_protected, "feature the biased model uses")
      ->required();
  fw->add_option("--foil1", fw_foil1, "feature the innocuous model claims")
      ->required();
  fw->add_option("--foil2", fw_foil2, "optional second foil feature");
  fw->add_option("--attack", fw_attack,
                 "scaffold style: 'lime' (Gaussian probes) or 'shap' "
                 "(substitution hybrids)");
  fw->add_option("--width", fw_width, "perturbation width");
  fw->add_option("--samples", fw_samples, "Monte-Carlo sample count");
  fw->add_option("--seed", fw_seed, "random seed (env AXE_EVAL_SEED fallback)");
  fw->add_option("--jobs", fw_jobs, "worker threads");
  fw->add_option("--out", fw_out, "output directory")->required();

  // benchmark
  auto* bm = app.add_subcommand(
      "benchmark", "score several explainers across datasets from a manifest");
  std::string bm_manifest, bm_out;
  std::uint64_t bm_samples = 1000, bm_jobs = 1;
  std::uint64_t bm_seed = default_seed();
  double bm_width = 0.5;
  bm->add_option("--manifest", bm_manifest, "manifest JSON path")->required();
  bm->add_option("--samples", bm_samples, "explainer sample count");
  bm->add_option("--width", bm_width, "explainer noise width");
  bm->add_option("--seed", bm_seed, "random seed (env AXE_EVAL_SEED fallback)");
  bm->add_option("--jobs", bm_jobs, "worker threads");
  bm->add_option("--out", bm_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (ev->parsed()) {
    json cfg = {{"data", ev_data},       {"model", ev_model},
                {"explainer", ev_explainer}, {"metrics", split_csv(ev_metric)},
                {"k", ev_k},             {"width", ev_width},
                {"samples", ev_samples}, {"seed", ev_seed},
                {"jobs", ev_jobs},       {"leave_one_out", !ev_no_loo},
                {"out", ev_out}};
    if (ev_n == "auc") {
      cfg["n"] = "auc";
    } else {
      try {
        std::size_t pos = 0;
        const long long v = std::stoll(ev_n, &pos);
        if (pos != ev_n.size() || v < 1) throw std::invalid_argument(ev_n);
        cfg["n"] = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: --n must be a positive integer or 'auc'\n");
        return 2;
      }
    }
    return run(axev_evaluate, cfg, quiet);
  }
  if (sy->parsed()) {
    json cfg = {{"points_per_cluster", sy_points},
                {"stddev", sy_stddev},
                {"seed", sy_seed},
                {"jobs", sy_jobs},
                {"out", sy_out}};
    if (!sy_k.empty()) cfg["k_grid"] = sy_k;
    if (!sy_widths.empty()) cfg["width_grid"] = sy_widths;
    return run(axev_run_synthetic, cfg, quiet);
  }
  if (fw->parsed()) {
    json cfg = {{"data", fw_data},     {"protected", fw_protected},
                {"foil1", fw_foil1},   {"attack", fw_attack},
                {"width", fw_width},   {"samples", fw_samples},
                {"seed", fw_seed},     {"jobs", fw_jobs},
                {"out", fw_out}};
    if (!fw_name.empty()) cfg["dataset_name"] = fw_name;
    if (!fw_foil2.empty()) cfg["foil2"] = fw_foil2;
    return run(axev_run_fairwash, cfg, quiet);
  }
  json cfg = {{"manifest", bm_manifest}, {"sample_count", bm_samples},
              {"noise_width", bm_width}, {"seed", bm_seed},
              {"jobs", bm_jobs},         {"out", bm_out}};
  return run(axev_run_benchmark, cfg, quiet);
}
