#include "axeval/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include "axeval/axe.hpp"
#include "axeval/dataset.hpp"
#include "axeval/errors.hpp"
#include "axeval/experiments.hpp"
#include "axeval/explainers.hpp"
#include "axeval/metrics_gt.hpp"
#include "axeval/model.hpp"
#include "axeval/report.hpp"
#include "axeval/sensitivity.hpp"

namespace axeval {

namespace {

const std::vector<std::string> kMetricIds = {"axe", "pgi", "pgu", "fa", "ra",
                                             "sa", "sra", "rc", "pra"};

bool is_metric_id(const std::string& id) {
  for (const auto& m : kMetricIds)
    if (m == id) return true;
  return false;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

std::string out_dir(const nlohmann::json& cfg) {
  if (!cfg.contains("out") || !cfg["out"].is_string())
    throw ConfigError("config field 'out' (output directory) is required");
  const std::string dir = cfg["out"];
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename T>
T field(const nlohmann::json& cfg, const char* name, T def) {
  if (!cfg.contains(name)) return def;
  try {
    return cfg.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + name + "' has wrong type");
  }
}

std::string required_string(const nlohmann::json& cfg, const char* name) {
  if (!cfg.contains(name) || !cfg[name].is_string())
    throw ConfigError(std::string("config field '") + name + "' is required");
  return cfg[name];
}

}  // namespace

nlohmann::json run_evaluate_config(const nlohmann::json& cfg) {
  const std::string dir = out_dir(cfg);
  const std::string data_path = required_string(cfg, "data");
  const std::string model_spec = required_string(cfg, "model");
  const std::string explainer_spec = required_string(cfg, "explainer");
  if (!cfg.contains("metrics") || !cfg["metrics"].is_array() ||
      cfg["metrics"].empty())
    throw ConfigError("config field 'metrics' must be a nonempty array");
  std::vector<std::string> metrics =
      cfg["metrics"].get<std::vector<std::string>>();
  for (const auto& m : metrics)
    if (!is_metric_id(m)) throw ConfigError("unknown metric id: " + m);

  const bool n_is_auc = !cfg.contains("n") || cfg["n"] == "auc";
  std::size_t fixed_n = 0;
  if (!n_is_auc) {
    if (!cfg["n"].is_number_integer() ||
        (!cfg["n"].is_number_unsigned() && cfg["n"].get<long long>() < 0))
      throw ConfigError("config field 'n' must be a positive integer or \"auc\"");
    fixed_n = cfg["n"].get<std::size_t>();
  }
  const std::size_t k = field<std::size_t>(cfg, "k", 5);
  const double width = field<double>(cfg, "width", 0.5);
  const std::size_t samples = field<std::size_t>(cfg, "samples", 1000);
  const std::uint64_t seed = field<std::uint64_t>(cfg, "seed", 0);
  const std::size_t jobs = std::max<std::size_t>(1, field<std::size_t>(cfg, "jobs", 1));
  const bool leave_one_out = field<bool>(cfg, "leave_one_out", true);

  const Dataset ds = Dataset::load_csv(data_path);
  const std::size_t nu = ds.rows();
  const std::size_t n_features = ds.cols();
  if (!n_is_auc && (fixed_n < 1 || fixed_n > n_features))
    throw ConfigError("n out of range [1, N]");

  ModelPtr model;
  if (model_spec == "logistic" || model_spec == "mlp") {
    if (!ds.labels())
      throw DataError("builtin model fitting needs a target column in " + data_path);
    model = model_spec == "logistic"
                ? ModelPtr(fit_logistic(ds, *ds.labels()))
                : ModelPtr(fit_mlp(ds, *ds.labels(), 16, seed));
  } else {
    model = load_model(model_spec);
  }

  std::vector<Explanation> es;
  if (is_explainer_id(explainer_spec)) {
    ExplainerConfig ecfg;
    ecfg.explainer_id = explainer_spec;
    ecfg.sample_count = samples;
    ecfg.noise_width = width;
    ecfg.seed = seed;
    es.reserve(nu);
    for (std::size_t i = 0; i < nu; ++i) es.push_back(explain(*model, ds, i, ecfg));
  } else {
    es = load_explanations(explainer_spec, n_features);
    if (es.size() != nu)
      throw DataError("explanation file must hold one row per datapoint");
    for (std::size_t i = 0; i < nu; ++i)
      if (es[i].datapoint_index != i)
        throw DataError("explanation rows must cover datapoints 0..nu-1 in order");
  }

  std::vector<int> y_preds(nu);
  for (std::size_t i = 0; i < nu; ++i) y_preds[i] = model->label(ds.std_row(i));

  nlohmann::json resolved = {
      {"data", data_path},         {"model", model_spec},
      {"explainer", explainer_spec}, {"metrics", metrics},
      {"n", n_is_auc ? nlohmann::json("auc") : nlohmann::json(fixed_n)},
      {"k", k},                    {"width", width},
      {"samples", samples},        {"seed", seed},
      {"leave_one_out", leave_one_out}};
  // jobs is deliberately not echoed: reports are identical for any job count

  const LinearModel* linear = dynamic_cast<const LinearModel*>(model.get());

  nlohmann::json reports = nlohmann::json::object();
  std::string csv = "metric,n,aggregate\n";
  for (const auto& metric : metrics) {
    QualityReport report;
    report.metric_id = metric;
    report.params = resolved;

    const bool is_gt = metric == "fa" || metric == "ra" || metric == "sa" ||
                       metric == "sra" || metric == "rc" || metric == "pra";
    if (is_gt && !linear)
      throw ConfigError("ground-truth metric '" + metric +
                        "' requires a linear model's coefficients");

    auto per_point_gt = [&](std::size_t topn, std::vector<double>& out) {
      out.resize(nu);
      const auto& gt = linear->coefficients();
      for (std::size_t i = 0; i < nu; ++i) {
        const auto& e = es[i].importances;
        if (metric == "fa") out[i] = feature_agreement(e, gt, topn);
        else if (metric == "ra") out[i] = rank_agreement(e, gt, topn);
        else if (metric == "sa") out[i] = sign_agreement(e, gt, topn);
        else if (metric == "sra") out[i] = signed_rank_agreement(e, gt, topn);
        else if (metric == "rc") out[i] = rank_correlation(e, gt);
        else out[i] = pairwise_rank_agreement(e, gt);
      }
    };

    auto per_point_gap = [&](std::size_t topn, std::vector<double>& out) {
      out.resize(nu);
      for (std::size_t i = 0; i < nu; ++i) {
        PerturbationPlan plan;
        plan.n = topn;
        plan.width = width;
        plan.samples = samples;
        plan.seed = mix_seed(seed, i);
        if (metric == "pgi") {
          out[i] = pgi(*model, ds.std_row(i), es[i], plan);
        } else {
          plan.target = PerturbationPlan::Target::kUnimportant;
          out[i] = pgu(*model, ds.std_row(i), es[i], plan);
        }
      }
    };

    if (metric == "axe") {
      if (n_is_auc) {
        const auto auc = axe_auc(ds, y_preds, es, k, leave_one_out, jobs);
        report.aggregate_Q = auc.auc;
        report.auc_curve = auc.curve;
      } else {
        EvalConfig ecfg;
        ecfg.top_n = fixed_n;
        ecfg.k_neighbors = k;
        ecfg.leave_one_out = leave_one_out;
        AxeRun run(ds, y_preds, es, ecfg);
        report.aggregate_Q = run.score(jobs);
        report.per_point_q = run.per_point();
        report.cache = run.cache_stats();
      }
    } else if (metric == "pgi" || metric == "pgu") {
      if (n_is_auc) {
        std::vector<std::pair<std::size_t, double>> curve;
        std::vector<double> values;
        for (std::size_t topn = 1; topn <= n_features; ++topn) {
          std::vector<double> pp;
          per_point_gap(topn, pp);
          curve.emplace_back(topn, pairwise_mean(pp));
          values.push_back(curve.back().second);
        }
        report.aggregate_Q = pairwise_mean(values);
        report.auc_curve = std::move(curve);
      } else {
        per_point_gap(fixed_n, report.per_point_q);
        report.aggregate_Q = pairwise_mean(report.per_point_q);
      }
    } else if (metric == "rc" || metric == "pra") {
      per_point_gt(0, report.per_point_q);
      report.aggregate_Q = pairwise_mean(report.per_point_q);
      if (metric == "rc") report.params["rc_low_n"] = n_features < 3;
    } else {
      if (n_is_auc) {
        std::vector<std::pair<std::size_t, double>> curve;
        std::vector<double> values;
        for (std::size_t topn = 1; topn <= n_features; ++topn) {
          std::vector<double> pp;
          per_point_gt(topn, pp);
          curve.emplace_back(topn, pairwise_mean(pp));
          values.push_back(curve.back().second);
        }
        report.aggregate_Q = pairwise_mean(values);
        report.auc_curve = std::move(curve);
      } else {
        per_point_gt(fixed_n, report.per_point_q);
        report.aggregate_Q = pairwise_mean(report.per_point_q);
      }
    }

    const auto j = report.to_json();
    write_text(dir + "/" + metric + ".json", j.dump(2) + "\n");
    reports[metric] = j;
    csv += metric + "," + (n_is_auc ? "auc" : std::to_string(fixed_n)) + "," +
           nlohmann::json(report.aggregate_Q).dump() + "\n";
  }
  write_text(dir + "/report.csv", csv);

  nlohmann::json combined = {{"config", resolved}, {"reports", reports}};
  write_text(dir + "/report.json", combined.dump(2) + "\n");
  return combined;
}

nlohmann::json run_synthetic_config(const nlohmann::json& cfg) {
  const std::string dir = out_dir(cfg);
  FourGaussianSpec spec;
  spec.points_per_cluster = field<std::size_t>(cfg, "points_per_cluster", 5000);
  spec.cluster_stddev = field<double>(cfg, "stddev", 0.8);
  spec.seed = field<std::uint64_t>(cfg, "seed", 0);
  const std::size_t jobs = std::max<std::size_t>(1, field<std::size_t>(cfg, "jobs", 1));
  std::vector<std::size_t> k_grid =
      field<std::vector<std::size_t>>(cfg, "k_grid", {1, 5, 50, 500, 5000});
  std::vector<double> width_grid =
      field<std::vector<double>>(cfg, "width_grid", default_width_grid());
  for (std::size_t k : k_grid)
    if (k < 1 || k > 4 * spec.points_per_cluster - 1)
      throw ConfigError("k grid value out of range for dataset size");

  const auto result = run_synthetic_study(spec, k_grid, width_grid, jobs);
  write_synthetic_study(result, dir);

  nlohmann::json j = {{"config",
                       {{"points_per_cluster", spec.points_per_cluster},
                        {"stddev", spec.cluster_stddev},
                        {"seed", spec.seed},
                        {"k_grid", k_grid},
                        {"width_grid", width_grid}}},
                      {"axe_ea", result.axe_ea},
                      {"axe_eb", result.axe_eb},
                      {"pgi_ea", result.pgi_ea},
                      {"pgi_eb", result.pgi_eb},
                      {"on_manifold", result.on_manifold}};
  write_text(dir + "/synthetic.json", j.dump(2) + "\n");
  return j;
}

nlohmann::json run_fairwash_config(const nlohmann::json& cfg) {
  const std::string dir = out_dir(cfg);
  const std::string data_path = required_string(cfg, "data");
  FairwashSpec spec;
  spec.dataset_path = data_path;
  spec.protected_feature = required_string(cfg, "protected");
  spec.foil1 = required_string(cfg, "foil1");
  if (cfg.contains("foil2")) spec.foil2 = required_string(cfg, "foil2");
  const std::string attack = field<std::string>(cfg, "attack", "lime");
  if (attack == "lime") spec.attack = AttackTarget::kLime;
  else if (attack == "shap") spec.attack = AttackTarget::kShap;
  else throw ConfigError("attack must be 'lime' or 'shap'");
  spec.perturb_width = field<double>(cfg, "width", 0.5);
  spec.perturb_samples = field<std::size_t>(cfg, "samples", 1000);
  spec.seed = field<std::uint64_t>(cfg, "seed", 0);
  const std::size_t jobs = std::max<std::size_t>(1, field<std::size_t>(cfg, "jobs", 1));
  const std::string name = field<std::string>(
      cfg, "dataset_name", std::filesystem::path(data_path).stem().string());

  const Dataset ds = Dataset::load_csv(data_path);
  const auto result = run_fairwash(ds, spec, name, jobs);
  write_fairwash_table({result}, dir);

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r = {{"metric", row.metric}, {"E_rho", row.e_rho},
                        {"E_phi", row.e_phi},   {"E_omega", row.e_omega},
                        {"pass", row.pass}};
    if (spec.foil2) r["E_psi"] = row.e_psi;
    rows.push_back(std::move(r));
  }
  nlohmann::json j = {{"dataset", result.dataset_name},
                      {"model", result.model_name},
                      {"detector_real_fidelity", result.detector_real_fidelity},
                      {"detector_synthetic_fidelity",
                       result.detector_synthetic_fidelity},
                      {"rows", rows}};
  write_text(dir + "/fairwash.json", j.dump(2) + "\n");
  return j;
}

nlohmann::json run_benchmark_config(const nlohmann::json& cfg) {
  const std::string dir = out_dir(cfg);
  const std::string manifest_path = required_string(cfg, "manifest");
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest: " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw ConfigError("invalid manifest JSON: " + std::string(e.what()));
  }

  BenchmarkSpec spec;
  if (manifest.contains("datasets"))
    for (const auto& d : manifest["datasets"])
      spec.datasets.push_back({d.at("name").get<std::string>(),
                               d.at("path").get<std::string>()});
  if (spec.datasets.empty())
    throw ConfigError("manifest lists no datasets");
  spec.models = manifest.value("models", std::vector<std::string>{"logistic"});
  spec.explainers = manifest.value(
      "explainers", std::vector<std::string>{"grad", "lime", "kernelshap", "random"});
  spec.axe_k = manifest.value("axe_k", std::vector<std::size_t>{1, 3, 5, 9});
  spec.sample_count = field<std::size_t>(cfg, "sample_count", 1000);
  spec.noise_width = field<double>(cfg, "noise_width", 0.5);
  spec.seed = field<std::uint64_t>(cfg, "seed", 0);
  const std::size_t jobs = std::max<std::size_t>(1, field<std::size_t>(cfg, "jobs", 1));

  const auto result = run_benchmark(spec, jobs);
  write_benchmark(result, dir);

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells)
    cells.push_back({{"dataset", c.dataset},
                     {"model", c.model},
                     {"metric", c.metric},
                     {"explainer", c.explainer},
                     {"value", c.value},
                     {"z_score", c.z_score}});
  nlohmann::json j = {{"gt_on_standardized", result.gt_on_standardized},
                      {"cells", cells}};
  write_text(dir + "/results.json", j.dump(2) + "\n");
  return j;
}

}  // namespace axeval
