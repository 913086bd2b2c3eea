#pragma once

#include <cstddef>
#include <vector>

namespace axeval {

// Ground-truth comparison metrics between an explanation e and a reference
// e_star of equal length. All are symmetric in their two vector arguments.
// Ranks are taken on |importance| with ties broken by ascending feature
// index; the sign of a zero importance counts as positive.

/// Fraction of top-n features common to both vectors.
double feature_agreement(const std::vector<double>& e,
                         const std::vector<double>& e_star, std::size_t n);

/// Fraction of top-n features common to both vectors at the same rank.
double rank_agreement(const std::vector<double>& e,
                      const std::vector<double>& e_star, std::size_t n);

/// Fraction of top-n features common to both vectors with the same sign.
double sign_agreement(const std::vector<double>& e,
                      const std::vector<double>& e_star, std::size_t n);

/// Fraction of top-n features common to both vectors with same sign and rank.
double signed_rank_agreement(const std::vector<double>& e,
                             const std::vector<double>& e_star, std::size_t n);

/// Spearman's rho over full magnitude rankings, average-rank tie handling.
/// Mechanically defined for any N >= 2; unreliable for very small N.
double rank_correlation(const std::vector<double>& e,
                        const std::vector<double>& e_star);

/// Fraction of feature pairs whose relative magnitude ordering agrees.
double pairwise_rank_agreement(const std::vector<double>& e,
                               const std::vector<double>& e_star);

}  // namespace axeval
