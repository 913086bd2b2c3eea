#include "axeval/linalg.hpp"

#include <cmath>

namespace axeval {

bool solve_spd(std::vector<double> a, std::vector<double> b, std::size_t d,
               std::vector<double>& x) {
  // in-place Cholesky A = L L^T
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double l = std::sqrt(diag);
    a[j * d + j] = l;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * d + k] * a[j * d + k];
      a[i * d + j] = s / l;
    }
  }
  // forward solve L z = b
  for (std::size_t i = 0; i < d; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * d + k] * b[k];
    b[i] = s / a[i * d + i];
  }
  // back solve L^T x = z
  for (std::size_t ii = d; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < d; ++k) s -= a[k * d + ii] * b[k];
    b[ii] = s / a[ii * d + ii];
  }
  x = std::move(b);
  return true;
}

bool weighted_least_squares(const std::vector<double>& design,
                            const std::vector<double>& y,
                            const std::vector<double>& weights,
                            std::size_t rows, std::size_t d,
                            double ridge_fallback, std::vector<double>& coef) {
  std::vector<double> ata(d * d, 0.0), atb(d, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = design.data() + r * d;
    const double w = weights[r];
    for (std::size_t i = 0; i < d; ++i) {
      const double wi = w * row[i];
      atb[i] += wi * y[r];
      for (std::size_t j = i; j < d; ++j) ata[i * d + j] += wi * row[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) ata[i * d + j] = ata[j * d + i];

  if (solve_spd(ata, atb, d, coef)) return false;
  for (std::size_t i = 0; i < d; ++i) ata[i * d + i] += ridge_fallback;
  if (!solve_spd(std::move(ata), std::move(atb), d, coef))
    coef.assign(d, 0.0);
  return true;
}

}  // namespace axeval
