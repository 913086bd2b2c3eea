#include "axeval/metrics_gt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "axeval/errors.hpp"
#include "axeval/explanation.hpp"

namespace axeval {

namespace {

void check_pair(const std::vector<double>& e, const std::vector<double>& e_star) {
  if (e.empty() || e.size() != e_star.size())
    throw ConfigError("metric requires two equal-length nonempty vectors");
}

std::vector<std::size_t> topn(const std::vector<double>& v, std::size_t n) {
  Explanation e;
  e.importances = v;
  return top_n_features(e, n);
}

// rank position (0 = most important) for every feature
std::vector<std::size_t> rank_positions(const std::vector<double>& v) {
  const auto order = topn(v, v.size());
  std::vector<std::size_t> pos(v.size());
  for (std::size_t r = 0; r < order.size(); ++r) pos[order[r]] = r;
  return pos;
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

double feature_agreement(const std::vector<double>& e,
                         const std::vector<double>& e_star, std::size_t n) {
  check_pair(e, e_star);
  const auto a = topn(e, n);
  const auto b = topn(e_star, n);
  std::vector<bool> in_b(e.size(), false);
  for (std::size_t j : b) in_b[j] = true;
  std::size_t common = 0;
  for (std::size_t j : a) common += in_b[j];
  return static_cast<double>(common) / static_cast<double>(n);
}

double rank_agreement(const std::vector<double>& e,
                      const std::vector<double>& e_star, std::size_t n) {
  check_pair(e, e_star);
  const auto a = topn(e, n);
  const auto b = topn(e_star, n);
  std::size_t same = 0;
  for (std::size_t r = 0; r < n; ++r) same += a[r] == b[r];
  return static_cast<double>(same) / static_cast<double>(n);
}

double sign_agreement(const std::vector<double>& e,
                      const std::vector<double>& e_star, std::size_t n) {
  check_pair(e, e_star);
  const auto a = topn(e, n);
  const auto b = topn(e_star, n);
  std::vector<bool> in_b(e.size(), false);
  for (std::size_t j : b) in_b[j] = true;
  std::size_t hits = 0;
  for (std::size_t j : a)
    hits += in_b[j] && sign_of(e[j]) == sign_of(e_star[j]);
  return static_cast<double>(hits) / static_cast<double>(n);
}

double signed_rank_agreement(const std::vector<double>& e,
                             const std::vector<double>& e_star, std::size_t n) {
  check_pair(e, e_star);
  const auto a = topn(e, n);
  const auto b = topn(e_star, n);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r)
    hits += a[r] == b[r] && sign_of(e[a[r]]) == sign_of(e_star[b[r]]);
  return static_cast<double>(hits) / static_cast<double>(n);
}

double rank_correlation(const std::vector<double>& e,
                        const std::vector<double>& e_star) {
  check_pair(e, e_star);
  const std::size_t n = e.size();
  if (n < 2) throw ConfigError("rank correlation requires at least 2 features");

  auto avg_ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(v[a]) < std::abs(v[b]);
    });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && std::abs(v[idx[j + 1]]) == std::abs(v[idx[i]])) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) rank[idx[t]] = avg;
      i = j + 1;
    }
    return rank;
  };

  const auto ra = avg_ranks(e);
  const auto rb = avg_ranks(e_star);
  double ma = 0.0, mb = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    ma += ra[j];
    mb += rb[j];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double da = ra[j] - ma;
    const double db = rb[j] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;  // a fully tied ranking
  return cov / std::sqrt(va * vb);
}

double pairwise_rank_agreement(const std::vector<double>& e,
                               const std::vector<double>& e_star) {
  check_pair(e, e_star);
  const std::size_t n = e.size();
  if (n < 2) throw ConfigError("pairwise rank agreement requires >= 2 features");
  const auto pa = rank_positions(e);
  const auto pb = rank_positions(e_star);
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      agree += (pa[i] < pa[j]) == (pb[i] < pb[j]);
      ++total;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace axeval
