#include "axeval/explanation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "axeval/errors.hpp"

namespace axeval {

namespace {

std::vector<std::size_t> ranked_by_magnitude(const Explanation& e) {
  for (double v : e.importances)
    if (!std::isfinite(v)) throw DataError("non-finite importance value");
  std::vector<std::size_t> idx(e.importances.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(e.importances[a]) > std::abs(e.importances[b]);
  });
  return idx;
}

}  // namespace

std::vector<std::size_t> top_n_features(const Explanation& e, std::size_t n) {
  if (n < 1 || n > e.importances.size())
    throw ConfigError("top_n_features: n out of range [1, N]");
  auto idx = ranked_by_magnitude(e);
  idx.resize(n);
  return idx;
}

std::vector<std::size_t> bottom_n_features(const Explanation& e, std::size_t n) {
  if (n < 1 || n > e.importances.size())
    throw ConfigError("bottom_n_features: n out of range [1, N]");
  auto idx = ranked_by_magnitude(e);
  // smallest magnitudes, ascending, index tie-break preserved by taking the
  // tail of the stable descending order and reversing groups
  std::vector<std::size_t> out(idx.end() - n, idx.end());
  std::reverse(out.begin(), out.end());
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(e.importances[a]);
    const double mb = std::abs(e.importances[b]);
    if (ma != mb) return ma < mb;
    return a < b;
  });
  return out;
}

void save_explanations(const std::vector<Explanation>& es,
                       const std::vector<std::string>& column_names,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write explanation file: " + path);
  out << "datapoint_index";
  for (const auto& name : column_names) out << "," << name;
  out << "\n";
  out.precision(17);
  for (const auto& e : es) {
    if (e.importances.size() != column_names.size())
      throw DataError("explanation length does not match column count");
    out << e.datapoint_index;
    for (double v : e.importances) out << "," << v;
    out << "\n";
  }
}

std::vector<Explanation> load_explanations(const std::string& path,
                                           std::size_t expected_features) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open explanation file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty explanation file: " + path);
  std::vector<Explanation> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Explanation e;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      try {
        if (first) {
          e.datapoint_index = std::stoul(cell);
          first = false;
        } else {
          e.importances.push_back(std::stod(cell));
        }
      } catch (const std::exception&) {
        throw DataError("non-numeric cell '" + cell + "' at row " +
                        std::to_string(lineno) + " in " + path);
      }
    }
    if (e.importances.size() != expected_features)
      throw DataError("explanation row " + std::to_string(lineno) + " in " +
                      path + " has " + std::to_string(e.importances.size()) +
                      " importances, expected " +
                      std::to_string(expected_features));
    for (double v : e.importances)
      if (!std::isfinite(v)) throw DataError("non-finite importance in " + path);
    e.explainer_id = "file";
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace axeval
