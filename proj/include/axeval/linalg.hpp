#pragma once

#include <cstddef>
#include <vector>

namespace axeval {

/// Solve the symmetric positive-definite system A x = b (A row-major d x d)
/// by Cholesky. Returns false when A is not numerically SPD; x is untouched.
bool solve_spd(std::vector<double> a, std::vector<double> b, std::size_t d,
               std::vector<double>& x);

/// Weighted least squares of y on rows of the design matrix (rows x d,
/// row-major) via normal equations. Falls back to ridge with the given
/// penalty when the normal matrix is singular; returns true if ridge was
/// needed.
bool weighted_least_squares(const std::vector<double>& design,
                            const std::vector<double>& y,
                            const std::vector<double>& weights,
                            std::size_t rows, std::size_t d,
                            double ridge_fallback, std::vector<double>& coef);

}  // namespace axeval
