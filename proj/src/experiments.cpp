#include "axeval/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "axeval/axe.hpp"
#include "axeval/errors.hpp"
#include "axeval/explainers.hpp"
#include "axeval/metrics_gt.hpp"
#include "axeval/rng.hpp"
#include "axeval/sensitivity.hpp"

namespace axeval {

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  if (!out) throw DataError("cannot write " + dir + "/" + name);
  out.precision(17);
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
}

Explanation one_hot(std::size_t n_features, std::size_t hot) {
  Explanation e;
  e.importances.assign(n_features, 0.0);
  e.importances[hot] = 1.0;
  e.explainer_id = "onehot_" + std::to_string(hot);
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------

RegionHeatmaps run_region_heatmaps(std::pair<double, double> beta,
                                   std::size_t grid_resolution) {
  if (grid_resolution < 2) throw ConfigError("grid resolution must be >= 2");
  const std::vector<double> e_star = {beta.first, beta.second};
  RegionHeatmaps out;
  out.resolution = grid_resolution;
  const char* metrics[] = {"fa", "ra", "sa", "sra", "pra"};
  for (const char* m : metrics)
    out.grids[m].assign(grid_resolution * grid_resolution, 0.0);

  for (std::size_t r = 0; r < grid_resolution; ++r) {
    const double i2 = -1.0 + 2.0 * (static_cast<double>(r) + 0.5) /
                                 static_cast<double>(grid_resolution);
    for (std::size_t c = 0; c < grid_resolution; ++c) {
      const double i1 = -1.0 + 2.0 * (static_cast<double>(c) + 0.5) /
                                   static_cast<double>(grid_resolution);
      const std::vector<double> e = {i1, i2};
      const std::size_t cell = r * grid_resolution + c;
      out.grids["fa"][cell] = feature_agreement(e, e_star, 2);
      out.grids["ra"][cell] = rank_agreement(e, e_star, 2);
      out.grids["sa"][cell] = sign_agreement(e, e_star, 2);
      out.grids["sra"][cell] = signed_rank_agreement(e, e_star, 2);
      out.grids["pra"][cell] = pairwise_rank_agreement(e, e_star);
    }
  }
  return out;
}

void write_region_heatmaps(const RegionHeatmaps& r, const std::string& dir) {
  for (const auto& [metric, grid] : r.grids) {
    auto out = open_out(dir, "fig3_" + metric + ".csv");
    out << "i1,i2,value\n";
    for (std::size_t row = 0; row < r.resolution; ++row) {
      const double i2 = -1.0 + 2.0 * (static_cast<double>(row) + 0.5) /
                                   static_cast<double>(r.resolution);
      for (std::size_t col = 0; col < r.resolution; ++col) {
        const double i1 = -1.0 + 2.0 * (static_cast<double>(col) + 0.5) /
                                     static_cast<double>(r.resolution);
        out << i1 << "," << i2 << "," << grid[row * r.resolution + col] << "\n";
      }
    }
  }
}

// ---------------------------------------------------------------------------

FourGaussianData make_four_gaussian(const FourGaussianSpec& spec) {
  if (!(spec.cluster_stddev > 0.0))
    throw ConfigError("cluster stddev must be positive");
  if (spec.points_per_cluster < 1)
    throw ConfigError("points_per_cluster must be >= 1");
  static constexpr double centers[4][2] = {
      {2.0, 2.0}, {-2.0, 2.0}, {-2.0, -2.0}, {2.0, -2.0}};
  Rng rng(spec.seed);
  std::vector<double> features;
  features.reserve(spec.points_per_cluster * 8);
  std::vector<int> clusters;
  clusters.reserve(spec.points_per_cluster * 4);
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < spec.points_per_cluster; ++i) {
      features.push_back(rng.normal(centers[c][0], spec.cluster_stddev));
      features.push_back(rng.normal(centers[c][1], spec.cluster_stddev));
      clusters.push_back(c);
    }
  Dataset ds(std::move(features), 2, {"X1", "X2"});
  // raw X1 > 0 expressed as a threshold in standardized coordinates
  const double threshold = (0.0 - ds.mean()[0]) / ds.stddev()[0];
  ModelPtr model = std::make_shared<FunctionModel>(
      [threshold](std::span<const double> x) {
        return x[0] > threshold ? 1.0 : 0.0;
      });
  std::vector<double> q = {(2.0 - ds.mean()[0]) / ds.stddev()[0],
                           (2.0 - ds.mean()[1]) / ds.stddev()[1]};
  return FourGaussianData{std::move(ds), std::move(clusters), std::move(model),
                          std::move(q)};
}

std::vector<double> default_width_grid() {
  // symlog-style decade grid 1e-3 .. 1e2, three points per decade
  std::vector<double> grid;
  for (int d = -3; d <= 1; ++d)
    for (double m : {1.0, 2.0, 5.0}) grid.push_back(m * std::pow(10.0, d));
  grid.push_back(100.0);
  return grid;
}

SyntheticStudyResult run_synthetic_study(const FourGaussianSpec& spec,
                                         const std::vector<std::size_t>& k_grid,
                                         const std::vector<double>& width_grid,
                                         std::size_t jobs) {
  if (k_grid.empty() || width_grid.empty())
    throw ConfigError("synthetic study requires nonempty k and width grids");
  const auto data = make_four_gaussian(spec);
  const std::size_t nu = data.dataset.rows();

  std::vector<int> y_preds(nu);
  for (std::size_t i = 0; i < nu; ++i)
    y_preds[i] = data.model->label(data.dataset.std_row(i));

  auto make_set = [&](std::size_t hot) {
    std::vector<Explanation> es(nu, one_hot(2, hot));
    for (std::size_t i = 0; i < nu; ++i) es[i].datapoint_index = i;
    return es;
  };
  const auto set_a = make_set(0);
  const auto set_b = make_set(1);

  SyntheticStudyResult out;
  out.k_grid = k_grid;
  out.width_grid = width_grid;
  for (std::size_t k : k_grid) {
    EvalConfig cfg;
    cfg.top_n = 1;
    cfg.k_neighbors = k;
    AxeRun run_a(data.dataset, y_preds, set_a, cfg);
    AxeRun run_b(data.dataset, y_preds, set_b, cfg);
    out.axe_ea.push_back(run_a.score(jobs));
    out.axe_eb.push_back(run_b.score(jobs));
  }

  const Explanation ea = one_hot(2, 0);
  const Explanation eb = one_hot(2, 1);
  for (std::size_t w = 0; w < width_grid.size(); ++w) {
    PerturbationPlan plan;
    plan.n = 1;
    plan.width = width_grid[w];
    plan.samples = 1000;
    plan.seed = mix_seed(spec.seed, w);
    out.pgi_ea.push_back(pgi(*data.model, data.query_std, ea, plan));
    out.pgi_eb.push_back(pgi(*data.model, data.query_std, eb, plan));
    out.on_manifold.push_back(on_manifold_probability(
        data.dataset, data.query_std, {0}, width_grid[w], 10000,
        mix_seed(spec.seed, 1000 + w), &data.clusters));
  }
  return out;
}

void write_synthetic_study(const SyntheticStudyResult& r,
                           const std::string& dir) {
  {
    auto out = open_out(dir, "fig6.csv");
    out << "k,axe_ea,axe_eb\n";
    for (std::size_t i = 0; i < r.k_grid.size(); ++i)
      out << r.k_grid[i] << "," << r.axe_ea[i] << "," << r.axe_eb[i] << "\n";
  }
  {
    auto out = open_out(dir, "fig5.csv");
    out << "width,pgi_ea,pgi_eb,on_manifold\n";
    for (std::size_t i = 0; i < r.width_grid.size(); ++i)
      out << r.width_grid[i] << "," << r.pgi_ea[i] << "," << r.pgi_eb[i] << ","
          << r.on_manifold[i] << "\n";
  }
}

// ---------------------------------------------------------------------------

FairwashResult run_fairwash(const Dataset& ds, const FairwashSpec& spec,
                            const std::string& dataset_name, std::size_t jobs) {
  const std::size_t n = ds.cols();
  const std::size_t nu = ds.rows();
  const std::size_t rho = ds.column_index(spec.protected_feature);
  const std::size_t phi = ds.column_index(spec.foil1);
  std::optional<std::size_t> psi;
  if (spec.foil2) psi = ds.column_index(*spec.foil2);

  const ModelPtr model = build_scaffold(ds, rho, phi, spec.attack,
                                        spec.perturb_width, spec.seed);
  const auto* scaffold = dynamic_cast<const ScaffoldedModel*>(model.get());

  std::vector<int> y_preds(nu);
  for (std::size_t i = 0; i < nu; ++i)
    y_preds[i] = model->label(ds.std_row(i));

  // mean AXE / PGI / -PGU for the one-hot explanation set on feature f
  auto eval_feature = [&](std::size_t f) {
    std::vector<Explanation> es(nu, one_hot(n, f));
    for (std::size_t i = 0; i < nu; ++i) es[i].datapoint_index = i;
    EvalConfig cfg;
    cfg.top_n = 1;
    cfg.k_neighbors = 5;
    AxeRun run(ds, y_preds, es, cfg);
    const double axe = run.score(jobs);

    std::vector<double> gi(nu), gu(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      PerturbationPlan pi;
      pi.n = 1;
      pi.width = spec.perturb_width;
      pi.samples = spec.perturb_samples;
      pi.seed = mix_seed(spec.seed, i * n + f);
      gi[i] = pgi(*model, ds.std_row(i), es[i], pi);
      PerturbationPlan pu = pi;
      pu.target = PerturbationPlan::Target::kUnimportant;
      gu[i] = pgu(*model, ds.std_row(i), es[i], pu);
    }
    return std::array<double, 3>{axe, pairwise_mean(gi), -pairwise_mean(gu)};
  };

  const auto q_rho = eval_feature(rho);
  const auto q_phi = eval_feature(phi);
  std::array<double, 3> q_psi = {std::nan(""), std::nan(""), std::nan("")};
  if (psi) q_psi = eval_feature(*psi);

  std::array<double, 3> q_omega = {0.0, 0.0, 0.0};
  std::size_t n_omega = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (f == rho || f == phi || (psi && f == *psi)) continue;
    const auto q = eval_feature(f);
    for (int m = 0; m < 3; ++m) q_omega[m] += q[m];
    ++n_omega;
  }
  if (n_omega > 0)
    for (auto& v : q_omega) v /= static_cast<double>(n_omega);

  FairwashResult out;
  out.dataset_name = dataset_name;
  out.model_name = spec.attack == AttackTarget::kLime ? "m_L" : "m_S";
  out.detector_real_fidelity = scaffold->build_report().real_fidelity;
  out.detector_synthetic_fidelity = scaffold->build_report().synthetic_fidelity;
  const char* metric_ids[3] = {"axe", "pgi", "neg_pgu"};
  for (int m = 0; m < 3; ++m) {
    FairwashRow row;
    row.metric = metric_ids[m];
    row.e_rho = q_rho[m];
    row.e_phi = q_phi[m];
    row.e_psi = q_psi[m];
    row.e_omega = q_omega[m];
    row.pass = row.e_rho > row.e_phi && (!psi || row.e_rho > row.e_psi);
    out.rows.push_back(row);
  }
  return out;
}

void write_fairwash_table(const std::vector<FairwashResult>& results,
                          const std::string& dir) {
  auto out = open_out(dir, "table2.csv");
  out << "dataset,model,metric,E_rho,E_phi,E_psi,E_omega,pass\n";
  for (const auto& r : results)
    for (const auto& row : r.rows) {
      out << r.dataset_name << "," << r.model_name << "," << row.metric << ","
          << row.e_rho << "," << row.e_phi << ",";
      if (std::isnan(row.e_psi))
        out << "na";
      else
        out << row.e_psi;
      out << "," << row.e_omega << "," << (row.pass ? 1 : 0) << "\n";
    }
}

// ---------------------------------------------------------------------------

namespace {

struct ExplainedDataset {
  std::vector<Explanation> explanations;
};

double mean_over_points(const std::vector<double>& v) { return pairwise_mean(v); }

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, std::size_t jobs) {
  if (spec.datasets.empty()) throw ConfigError("benchmark: no datasets listed");
  if (spec.models.empty()) throw ConfigError("benchmark: no models listed");
  if (spec.explainers.empty()) throw ConfigError("benchmark: no explainers listed");
  for (const auto& id : spec.explainers)
    if (!is_explainer_id(id)) throw ConfigError("unknown explainer id: " + id);
  for (const auto& m : spec.models)
    if (m != "logistic" && m != "mlp")
      throw ConfigError("benchmark model must be 'logistic' or 'mlp'");

  BenchmarkResult result;
  for (const auto& entry : spec.datasets) {
    const Dataset ds = Dataset::load_csv(entry.path);
    if (!ds.labels())
      throw DataError("benchmark dataset needs a target column: " + entry.path);
    const std::size_t nu = ds.rows();
    const std::size_t n = ds.cols();

    for (const auto& model_name : spec.models) {
      ModelPtr model;
      std::vector<double> gt_coefficients;
      if (model_name == "logistic") {
        auto lm = fit_logistic(ds, *ds.labels());
        gt_coefficients = lm->coefficients();
        model = lm;
      } else {
        model = fit_mlp(ds, *ds.labels(), 16, spec.seed);
      }
      std::vector<int> y_preds(nu);
      for (std::size_t i = 0; i < nu; ++i)
        y_preds[i] = model->label(ds.std_row(i));

      // metric id -> explainer -> value, filled below then standardized
      std::map<std::string, std::map<std::string, double>> table;

      for (const auto& explainer : spec.explainers) {
        ExplainerConfig ecfg;
        ecfg.explainer_id = explainer;
        ecfg.sample_count = spec.sample_count;
        ecfg.noise_width = spec.noise_width;
        ecfg.seed = spec.seed;
        std::vector<Explanation> es;
        es.reserve(nu);
        for (std::size_t i = 0; i < nu; ++i)
          es.push_back(explain(*model, ds, i, ecfg));

        if (!gt_coefficients.empty()) {
          // top-n metrics aggregated over all n; RC and PRA are n-free
          std::vector<double> fa_n, ra_n, sa_n, sra_n;
          for (std::size_t topn = 1; topn <= n; ++topn) {
            std::vector<double> fa(nu), ra(nu), sa(nu), sra(nu);
            for (std::size_t i = 0; i < nu; ++i) {
              fa[i] = feature_agreement(es[i].importances, gt_coefficients, topn);
              ra[i] = rank_agreement(es[i].importances, gt_coefficients, topn);
              sa[i] = sign_agreement(es[i].importances, gt_coefficients, topn);
              sra[i] = signed_rank_agreement(es[i].importances, gt_coefficients,
                                             topn);
            }
            fa_n.push_back(mean_over_points(fa));
            ra_n.push_back(mean_over_points(ra));
            sa_n.push_back(mean_over_points(sa));
            sra_n.push_back(mean_over_points(sra));
          }
          table["fa"][explainer] = pairwise_mean(fa_n);
          table["ra"][explainer] = pairwise_mean(ra_n);
          table["sa"][explainer] = pairwise_mean(sa_n);
          table["sra"][explainer] = pairwise_mean(sra_n);
          std::vector<double> rc(nu), pra(nu);
          for (std::size_t i = 0; i < nu; ++i) {
            rc[i] = rank_correlation(es[i].importances, gt_coefficients);
            pra[i] = pairwise_rank_agreement(es[i].importances, gt_coefficients);
          }
          table["rc"][explainer] = mean_over_points(rc);
          table["pra"][explainer] = mean_over_points(pra);
        }

        std::vector<double> pgi_n, pgu_n;
        for (std::size_t topn = 1; topn <= n; ++topn) {
          std::vector<double> gi(nu), gu(nu);
          for (std::size_t i = 0; i < nu; ++i) {
            PerturbationPlan pi;
            pi.n = topn;
            pi.width = spec.noise_width;
            pi.samples = spec.sample_count;
            pi.seed = mix_seed(spec.seed, i);
            gi[i] = pgi(*model, ds.std_row(i), es[i], pi);
            PerturbationPlan pu = pi;
            pu.target = PerturbationPlan::Target::kUnimportant;
            gu[i] = pgu(*model, ds.std_row(i), es[i], pu);
          }
          pgi_n.push_back(mean_over_points(gi));
          pgu_n.push_back(mean_over_points(gu));
        }
        table["pgi"][explainer] = pairwise_mean(pgi_n);
        table["neg_pgu"][explainer] = -pairwise_mean(pgu_n);

        for (std::size_t k : spec.axe_k) {
          const auto auc = axe_auc(ds, y_preds, es, k, true, jobs);
          table["axe_k" + std::to_string(k)][explainer] = auc.auc;
        }
      }

      // z-score standardization across explainers within each metric cell
      for (const auto& [metric, by_explainer] : table) {
        double mean = 0.0;
        for (const auto& [_, v] : by_explainer) mean += v;
        mean /= static_cast<double>(by_explainer.size());
        double var = 0.0;
        for (const auto& [_, v] : by_explainer) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(by_explainer.size()));
        for (const auto& [explainer, v] : by_explainer) {
          BenchmarkCell cell;
          cell.dataset = entry.name;
          cell.model = model_name;
          cell.metric = metric;
          cell.explainer = explainer;
          cell.value = v;
          cell.z_score = sd > 0.0 ? (v - mean) / sd : 0.0;
          result.cells.push_back(cell);
        }
      }
    }
  }
  return result;
}

void write_benchmark(const BenchmarkResult& r, const std::string& dir) {
  std::map<std::pair<std::string, std::string>, std::vector<const BenchmarkCell*>>
      by_file;
  for (const auto& cell : r.cells)
    by_file[{cell.dataset, cell.model}].push_back(&cell);
  for (const auto& [key, cells] : by_file) {
    const std::string prefix = key.second == "logistic" ? "fig7_" : "fig8_";
    auto out = open_out(dir, prefix + key.first + ".csv");
    out << "metric,explainer,value,z_score\n";
    for (const auto* c : cells)
      out << c->metric << "," << c->explainer << "," << c->value << ","
          << c->z_score << "\n";
  }
}

// ---------------------------------------------------------------------------

Dataset make_standin_dataset(std::size_t rows, std::size_t features,
                             std::uint64_t seed) {
  if (rows < 4 || features < 3)
    throw ConfigError("stand-in generation needs rows >= 4 and features >= 3");
  Rng rng(seed);
  // features are noisy mixes of two latent factors; perturbed copies fall off
  // this near-planar manifold, which is what the scaffold detector keys on
  std::vector<double> mix_u(features), mix_v(features);
  for (std::size_t j = 0; j < features; ++j) {
    const double theta = rng.uniform(0.0, M_PI);
    mix_u[j] = std::cos(theta);
    mix_v[j] = std::sin(theta);
  }
  std::vector<double> weights(features);
  for (double& w : weights) w = rng.uniform(-1.0, 1.0);

  std::vector<double> data;
  data.reserve(rows * features);
  std::vector<int> labels;
  labels.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double u = rng.normal();
    const double v = rng.normal();
    double z = 0.0;
    for (std::size_t j = 0; j < features; ++j) {
      const double x = mix_u[j] * u + mix_v[j] * v + 0.15 * rng.normal();
      data.push_back(x);
      z += weights[j] * x;
    }
    labels.push_back(z + 0.3 * rng.normal() > 0.0 ? 1 : 0);
  }
  std::vector<std::string> names(features);
  for (std::size_t j = 0; j < features; ++j) names[j] = "f" + std::to_string(j);
  return Dataset(std::move(data), features, std::move(names), std::move(labels));
}

}  // namespace axeval
