#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "axeval/axe.hpp"
#include "axeval/dataset.hpp"
#include "axeval/errors.hpp"
#include "axeval/experiments.hpp"
#include "axeval/knn.hpp"
#include "axeval/model.hpp"
#include "axeval/rng.hpp"
#include "axeval/sensitivity.hpp"

using namespace axeval;

namespace {

Dataset random_dataset(Rng& rng, std::size_t nu, std::size_t n) {
  std::vector<double> raw(nu * n);
  for (double& v : raw) v = rng.normal(0.0, 2.0);
  std::vector<std::string> names(n);
  for (std::size_t j = 0; j < n; ++j) names[j] = "f" + std::to_string(j);
  return Dataset(std::move(raw), n, std::move(names));
}

std::vector<Explanation> random_explanations(Rng& rng, std::size_t nu,
                                             std::size_t n) {
  std::vector<Explanation> es(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    es[i].datapoint_index = i;
    es[i].importances.resize(n);
    for (double& v : es[i].importances) v = rng.uniform(-1.0, 1.0);
  }
  return es;
}

std::vector<Explanation> uniform_set(std::size_t nu, std::vector<double> imp) {
  std::vector<Explanation> es(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    es[i].datapoint_index = i;
    es[i].importances = imp;
  }
  return es;
}

std::vector<int> random_preds(Rng& rng, std::size_t nu) {
  std::vector<int> y(nu);
  for (int& v : y) v = static_cast<int>(rng.below(2));
  return y;
}

}  // namespace

TEST_CASE("axe run validation") {
  Rng rng(1);
  Dataset ds = random_dataset(rng, 10, 3);
  auto y = random_preds(rng, 10);
  auto es = random_explanations(rng, 10, 3);
  EvalConfig cfg;

  cfg.top_n = 4;
  CHECK_THROWS_AS(AxeRun(ds, y, es, cfg), ConfigError);
  cfg.top_n = 1;
  cfg.k_neighbors = 10;
  CHECK_THROWS_AS(AxeRun(ds, y, es, cfg), ConfigError);
  cfg.k_neighbors = 3;
  CHECK_THROWS_AS(AxeRun(ds, std::vector<int>(9, 0), es, cfg), ConfigError);
  CHECK_THROWS_AS(AxeRun(ds, std::vector<int>(10, 2), es, cfg), ConfigError);
  es.pop_back();
  CHECK_THROWS_AS(AxeRun(ds, y, es, cfg), ConfigError);
}

TEST_CASE("cache shape: shared and distinct subsets") {
  Rng rng(2);
  const std::size_t nu = 12;
  Dataset ds = random_dataset(rng, nu, 4);
  auto y = random_preds(rng, nu);
  y[0] = 1;
  EvalConfig cfg;
  cfg.top_n = 1;
  cfg.k_neighbors = 3;

  AxeRun shared(ds, y, uniform_set(nu, {0.9, 0.1, 0.0, 0.0}), cfg);
  shared.score();
  CHECK(shared.cache_stats().size == 1);
  CHECK(shared.cache_stats().misses == 1);
  CHECK(shared.cache_stats().hits == nu - 1);

  // nu = 12 explanations with 4 distinct top-1 subsets
  auto es = random_explanations(rng, nu, 4);
  for (std::size_t i = 0; i < nu; ++i) {
    es[i].importances.assign(4, 0.0);
    es[i].importances[i % 4] = 1.0;
  }
  AxeRun distinct(ds, y, es, cfg);
  distinct.score();
  CHECK(distinct.cache_stats().size == 4);
  // bound: size <= min(nu, C(N, n))
  CHECK(distinct.cache_stats().size <= nu);
}

TEST_CASE("cached evaluation equals an uncached independent path bit-exactly") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t nu = 15 + rng.below(40);
    const std::size_t n = 2 + rng.below(4);
    Dataset ds = random_dataset(rng, nu, n);
    auto y = random_preds(rng, nu);
    auto es = random_explanations(rng, nu, n);
    EvalConfig cfg;
    cfg.top_n = 1 + rng.below(n);
    cfg.k_neighbors = 1 + rng.below(5);

    AxeRun run(ds, y, es, cfg);
    const double cached = run.score();

    // uncached: a fresh k-NN fit per datapoint
    std::vector<double> per(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      auto subset = top_n_features(es[i], cfg.top_n);
      std::sort(subset.begin(), subset.end());
      KnnModel m(ds, y, subset, cfg.k_neighbors);
      per[i] = m.predict_row(i) == y[i] ? 1.0 : 0.0;
    }
    CHECK(cached == pairwise_mean(per));
    CHECK(run.per_point() == per);
  }
}

TEST_CASE("scores are jobs-invariant and within [0,1]") {
  Rng rng(4);
  Dataset ds = random_dataset(rng, 60, 3);
  auto y = random_preds(rng, 60);
  auto es = random_explanations(rng, 60, 3);
  EvalConfig cfg;
  cfg.top_n = 2;
  AxeRun a(ds, y, es, cfg);
  const double s1 = a.score(1);
  const auto per1 = a.per_point();
  AxeRun b(ds, y, es, cfg);
  const double s4 = b.score(4);
  CHECK(s1 == s4);
  CHECK(per1 == b.per_point());
  CHECK(s1 >= 0.0);
  CHECK(s1 <= 1.0);
}

TEST_CASE("n = N makes every explanation equivalent") {
  Rng rng(5);
  Dataset ds = random_dataset(rng, 40, 3);
  auto y = random_preds(rng, 40);
  EvalConfig cfg;
  cfg.top_n = 3;
  AxeRun a(ds, y, random_explanations(rng, 40, 3), cfg);
  AxeRun b(ds, y, random_explanations(rng, 40, 3), cfg);
  CHECK(a.score() == b.score());
  CHECK(a.per_point() == b.per_point());
}

TEST_CASE("positive rescaling leaves axe unchanged") {
  Rng rng(6);
  Dataset ds = random_dataset(rng, 30, 4);
  auto y = random_preds(rng, 30);
  auto es = random_explanations(rng, 30, 4);
  auto scaled = es;
  for (auto& e : scaled)
    for (double& v : e.importances) v *= 412.75;
  EvalConfig cfg;
  cfg.top_n = 2;
  AxeRun a(ds, y, es, cfg);
  AxeRun b(ds, y, scaled, cfg);
  CHECK(a.score() == b.score());
}

TEST_CASE("auc curve endpoints and aggregation") {
  Rng rng(7);
  Dataset ds1 = random_dataset(rng, 25, 1);
  auto y1 = random_preds(rng, 25);
  auto es1 = random_explanations(rng, 25, 1);
  const auto r1 = axe_auc(ds1, y1, es1, 3);
  REQUIRE(r1.curve.size() == 1);
  EvalConfig cfg;
  cfg.top_n = 1;
  cfg.k_neighbors = 3;
  AxeRun single(ds1, y1, es1, cfg);
  CHECK(r1.auc == single.score());

  Dataset ds3 = random_dataset(rng, 30, 3);
  auto y3 = random_preds(rng, 30);
  auto es3 = random_explanations(rng, 30, 3);
  const auto r3 = axe_auc(ds3, y3, es3, 5);
  REQUIRE(r3.curve.size() == 3);
  std::vector<double> independent;
  for (std::size_t n = 1; n <= 3; ++n) {
    EvalConfig c;
    c.top_n = n;
    c.k_neighbors = 5;
    AxeRun run(ds3, y3, es3, c);
    const double v = run.score();
    CHECK(v == r3.curve[n - 1].second);
    independent.push_back(v);
  }
  CHECK(r3.auc == pairwise_mean(independent));
}

TEST_CASE("self-inclusion at k=1 is trivially perfect; leave-one-out is not") {
  Rng rng(8);
  Dataset ds = random_dataset(rng, 50, 2);
  auto y = random_preds(rng, 50);
  auto es = random_explanations(rng, 50, 2);
  EvalConfig cfg;
  cfg.top_n = 1;
  cfg.k_neighbors = 1;
  cfg.leave_one_out = false;
  AxeRun with_self(ds, y, es, cfg);
  CHECK(with_self.score() == 1.0);
  cfg.leave_one_out = true;
  AxeRun without(ds, y, es, cfg);
  CHECK(without.score() < 1.0);  // random targets cannot all be recovered
}

TEST_CASE("model relativism: swapping the model swaps the scores") {
  FourGaussianSpec spec;
  spec.points_per_cluster = 1000;
  spec.seed = 9;
  const auto data = make_four_gaussian(spec);
  const std::size_t nu = data.dataset.rows();

  const double thr_x2 =
      -data.dataset.mean()[1] / data.dataset.stddev()[1];
  FunctionModel on_x2(
      [thr_x2](std::span<const double> x) { return x[1] > thr_x2 ? 1.0 : 0.0; });

  auto preds = [&](const Model& m) {
    std::vector<int> y(nu);
    for (std::size_t i = 0; i < nu; ++i)
      y[i] = m.label(data.dataset.std_row(i));
    return y;
  };
  const auto y1 = preds(*data.model);
  const auto y2 = preds(on_x2);

  EvalConfig cfg;
  cfg.top_n = 1;
  const auto ea = uniform_set(nu, {1.0, 0.0});
  const auto eb = uniform_set(nu, {0.0, 1.0});

  const double a_m1 = AxeRun(data.dataset, y1, ea, cfg).score();
  const double b_m1 = AxeRun(data.dataset, y1, eb, cfg).score();
  const double a_m2 = AxeRun(data.dataset, y2, ea, cfg).score();
  const double b_m2 = AxeRun(data.dataset, y2, eb, cfg).score();
  CHECK(a_m1 >= 0.95);
  CHECK(b_m2 >= 0.95);
  CHECK(std::abs(a_m1 - b_m2) <= 0.05);
  CHECK(std::abs(b_m1 - a_m2) <= 0.05);
  CHECK(a_m1 > b_m1);
  CHECK(b_m2 > a_m2);
}

TEST_CASE("evaluation never leaves the dataset rows") {
  // wrapping the model to misbehave off the dataset rows cannot change AXE,
  // because AXE consumes only the on-row predictions
  FourGaussianSpec spec;
  spec.points_per_cluster = 200;
  spec.seed = 10;
  const auto data = make_four_gaussian(spec);
  const std::size_t nu = data.dataset.rows();

  std::set<std::vector<double>> rows;
  for (std::size_t i = 0; i < nu; ++i) {
    const auto r = data.dataset.std_row(i);
    rows.insert(std::vector<double>(r.begin(), r.end()));
  }
  const Model* base = data.model.get();
  FunctionModel wrapped([base, rows](std::span<const double> x) {
    const std::vector<double> key(x.begin(), x.end());
    const double s = base->score(x);
    return rows.count(key) ? s : 1.0 - s;  // inverted off the data manifold
  });

  auto preds = [&](const Model& m) {
    std::vector<int> y(nu);
    for (std::size_t i = 0; i < nu; ++i)
      y[i] = m.label(data.dataset.std_row(i));
    return y;
  };
  CHECK(preds(*base) == preds(wrapped));  // identical on-row behavior

  const auto es = uniform_set(nu, {1.0, 0.0});
  EvalConfig cfg;
  cfg.top_n = 1;
  AxeRun a(data.dataset, preds(*base), es, cfg);
  AxeRun b(data.dataset, preds(wrapped), es, cfg);
  CHECK(a.score() == b.score());
  CHECK(a.per_point() == b.per_point());

  // perturbation metrics do leave the rows and notice the wrap; evaluate at a
  // dataset row so the instance itself still scores through the base model
  PerturbationPlan plan;
  plan.width = 5.0;
  plan.samples = 200;
  plan.seed = 4;
  Explanation ea;
  ea.importances = {1.0, 0.0};
  bool pgi_changed = false;
  for (std::size_t i = 0; i < nu && !pgi_changed; ++i) {
    const std::vector<double> x(data.dataset.std_row(i).begin(),
                                data.dataset.std_row(i).end());
    pgi_changed = pgi(*base, x, ea, plan) != pgi(wrapped, x, ea, plan);
  }
  CHECK(pgi_changed);
}

TEST_CASE("per-point recovery is locally contextualized") {
  // two groups: in rows 0..49 the model follows f0, in rows 50..99 it follows
  // f1; the explanation that recovers a point depends on where the point lives
  Rng rng(11);
  const std::size_t half = 50;
  std::vector<double> raw;
  std::vector<int> y;
  for (std::size_t i = 0; i < 2 * half; ++i) {
    const bool right = i >= half;
    const double f0 = rng.normal(right ? 6.0 : 0.0, 0.4);
    const double f1 = rng.normal(right ? 0.0 : 6.0, 0.4);
    raw.push_back(f0);
    raw.push_back(f1);
    // left group: label tracks whether f1 is above its local center;
    // right group: label tracks f0 instead
    y.push_back(right ? (f0 > 6.0 ? 1 : 0) : (f1 > 6.0 ? 1 : 0));
  }
  Dataset ds(raw, 2, {"f0", "f1"});

  EvalConfig cfg;
  cfg.top_n = 1;
  const auto ea = uniform_set(2 * half, {1.0, 0.0});
  const auto eb = uniform_set(2 * half, {0.0, 1.0});
  AxeRun ra(ds, y, ea, cfg);
  ra.score();
  AxeRun rb(ds, y, eb, cfg);
  rb.score();

  auto group_mean = [&](const std::vector<double>& per, bool right) {
    double s = 0.0;
    for (std::size_t i = right ? half : 0; i < (right ? 2 * half : half); ++i)
      s += per[i];
    return s / half;
  };
  // left group is explained by f1, right group by f0
  CHECK(group_mean(rb.per_point(), false) > group_mean(ra.per_point(), false));
  CHECK(group_mean(ra.per_point(), true) > group_mean(rb.per_point(), true));
}
