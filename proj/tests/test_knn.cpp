#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "axeval/dataset.hpp"
#include "axeval/errors.hpp"
#include "axeval/experiments.hpp"
#include "axeval/knn.hpp"
#include "axeval/rng.hpp"

using namespace axeval;

namespace {

Dataset random_dataset(Rng& rng, std::size_t nu, std::size_t n) {
  std::vector<double> raw(nu * n);
  for (double& v : raw) v = rng.normal(0.0, 2.0);
  std::vector<std::string> names(n);
  for (std::size_t j = 0; j < n; ++j) names[j] = "f" + std::to_string(j);
  return Dataset(std::move(raw), n, std::move(names));
}

std::vector<int> random_targets(Rng& rng, std::size_t nu) {
  std::vector<int> t(nu);
  for (int& v : t) v = static_cast<int>(rng.below(2));
  return t;
}

// all-pairs oracle: full sort on (distance^2, row index)
int oracle_predict(const Dataset& ds, const std::vector<int>& targets,
                   const std::vector<std::size_t>& subset, std::size_t k,
                   std::size_t query, bool leave_one_out) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (leave_one_out && i == query) continue;
    double s = 0.0;
    for (std::size_t j : subset) {
      const double t = ds.std_at(i, j) - ds.std_at(query, j);
      s += t * t;
    }
    d.emplace_back(s, i);
  }
  std::sort(d.begin(), d.end());
  double mean = 0.0;
  for (std::size_t c = 0; c < k; ++c) mean += targets[d[c].second];
  mean /= static_cast<double>(k);
  return mean >= 0.5 ? 1 : 0;
}

}  // namespace

TEST_CASE("knn structural checks") {
  Rng rng(1);
  Dataset ds = random_dataset(rng, 4, 2);
  const std::vector<int> t = {0, 1, 1, 0};
  KnnModel m(ds, t, {0}, 1);
  CHECK(m.train_rows() == 4);
  CHECK(m.subset() == std::vector<std::size_t>{0});

  CHECK_THROWS_AS(KnnModel(ds, t, {}, 1), ConfigError);
  CHECK_THROWS_AS(KnnModel(ds, t, {0, 0}, 1), ConfigError);
  CHECK_THROWS_AS(KnnModel(ds, t, {5}, 1), ConfigError);
  CHECK_THROWS_AS(KnnModel(ds, t, {0}, 0), ConfigError);
  // k = rows leaves no neighbors under leave-one-out
  CHECK_THROWS_AS(KnnModel(ds, t, {0}, 4), ConfigError);
  CHECK_THROWS_AS(KnnModel(ds, {0, 1, 2, 0}, {0}, 1), ConfigError);
}

TEST_CASE("equidistant majority vote") {
  // three 1-d training points all at distance 1 from the query; the fourth
  // sits far away and never enters the neighbor set
  KnnModel m({1.0, -1.0, -1.0, 9.0}, 1, {1, 0, 1, 0}, 3);
  const std::vector<double> q = {0.0};
  CHECK(m.neighbor_mean(q, static_cast<std::size_t>(-1)) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(m.predict_point(q) == 1);
}

TEST_CASE("knn matches the brute-force oracle on random instances") {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nu = 20 + rng.below(180);
    const std::size_t n = 1 + rng.below(5);
    Dataset ds = random_dataset(rng, nu, n);
    auto targets = random_targets(rng, nu);
    if (std::count(targets.begin(), targets.end(), 1) == 0) targets[0] = 1;

    std::vector<std::size_t> subset(n);
    std::iota(subset.begin(), subset.end(), 0);
    for (std::size_t j = 0; j < n; ++j)
      std::swap(subset[j], subset[j + rng.below(n - j)]);
    subset.resize(1 + rng.below(n));
    std::sort(subset.begin(), subset.end());

    const std::size_t k = 1 + rng.below(std::min<std::size_t>(nu - 1, 9));
    KnnModel m(ds, targets, subset, k);
    for (int probe = 0; probe < 10; ++probe) {
      const std::size_t q = rng.below(nu);
      const bool loo = rng.below(2) == 1;
      CHECK(m.predict_row(q, loo) ==
            oracle_predict(ds, targets, subset, k, q, loo));
    }
  }
}

TEST_CASE("predictions are invariant to training-row permutation") {
  Rng rng(7);
  const std::size_t nu = 60;
  Dataset ds = random_dataset(rng, nu, 3);  // continuous draws: distinct distances
  auto targets = random_targets(rng, nu);
  targets[0] = 1;
  targets[1] = 0;
  KnnModel m(ds, targets, {0, 1, 2}, 5);

  std::vector<std::size_t> perm(nu);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t j = 0; j < nu; ++j)
    std::swap(perm[j], perm[j + rng.below(nu - j)]);
  std::vector<double> praw(nu * 3);
  std::vector<int> ptargets(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < 3; ++j)
      praw[i * 3 + j] = ds.raw_row(perm[i])[j];
    ptargets[i] = targets[perm[i]];
  }
  Dataset pds(praw, 3, {"a", "b", "c"});
  KnnModel pm(pds, ptargets, {0, 1, 2}, 5);
  for (std::size_t i = 0; i < nu; ++i)
    CHECK(m.predict_row(perm[i]) == pm.predict_row(i));
}

TEST_CASE("subset restriction equals zeroing the excluded coordinates") {
  Rng rng(13);
  const std::size_t nu = 80;
  Dataset ds = random_dataset(rng, nu, 4);
  auto targets = random_targets(rng, nu);
  targets[0] = 1;
  targets[1] = 0;
  const std::vector<std::size_t> subset = {1, 3};

  KnnModel restricted(ds, targets, subset, 3);
  std::vector<double> zeroed(nu * 4, 0.0);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j : subset) zeroed[i * 4 + j] = ds.std_at(i, j);
  KnnModel full(zeroed, 4, targets, 3);
  for (std::size_t i = 0; i < nu; ++i) {
    std::vector<double> q(4, 0.0);
    for (std::size_t j : subset) q[j] = ds.std_at(i, j);
    CHECK(restricted.predict_row(i, false) == full.predict_point(q));
  }
}

TEST_CASE("four-cluster data: X1 subset recovers the step model, X2 does not") {
  FourGaussianSpec spec;
  spec.points_per_cluster = 500;
  spec.seed = 4;
  const auto data = make_four_gaussian(spec);
  const std::size_t nu = data.dataset.rows();
  std::vector<int> y(nu);
  for (std::size_t i = 0; i < nu; ++i)
    y[i] = data.model->label(data.dataset.std_row(i));

  KnnModel on_x1(data.dataset, y, {0}, 5);
  CHECK(on_x1.predict_point(data.query_std) == 1);

  // restricted to X2 the neighbor mean hovers near 0.5 on the positive side
  KnnModel on_x2(data.dataset, y, {1}, 500);
  std::size_t correct = 0, total = 0;
  for (std::size_t i = 0; i < nu; ++i) {
    if (data.clusters[i] != 0) continue;
    correct += on_x2.predict_row(i) == y[i];
    ++total;
  }
  const double acc = static_cast<double>(correct) / total;
  CHECK(acc > 0.3);
  CHECK(acc < 0.7);
}
