#pragma once

#include <optional>
#include <vector>

#include "matfact/types.hpp"

namespace matfact {

/// Orthonormal basis of span(m) by Householder QR. Throws RankDeficient when
/// sigma_min < 1e-10 * sigma_max or m is zero.
Matrix orthonormal_basis(const Matrix& m);

/// Distance between column spaces,
///   D = sqrt(1 - Tr(Q1 Q1^T Q2 Q2^T) / max(q1, q2)),
/// after orthonormalizing both inputs. 0 for equal spaces, 1 for orthogonal.
double space_distance(const Matrix& q1, const Matrix& q2);

/// (1 / (T p1 p2)) sum_t ||est_t - truth_t||_F^2.
double common_mse(const MatrixSeries& est, const MatrixSeries& truth);

/// Per-evaluation-year statistics from a rolling refit.
struct RollingStats {
  std::size_t window_years = 0;
  std::vector<std::size_t> year_index;  // 0-based year being evaluated
  std::vector<double> mse_t;
  std::vector<double> rho_t;
  /// Loading-space drift against the previous window's fit; empty for the
  /// first evaluated year.
  std::vector<std::optional<double>> v_t;

  double mean_mse() const;
  double mean_rho() const;
  /// Mean over the years that have a predecessor; nullopt if none do.
  std::optional<double> mean_v() const;
};

/// Rolling validation: for every year y >= n, fit on years [y - n, y),
/// project the y-th year's observations on the fitted loadings and score
/// the reconstruction. Trailing periods that do not fill a year are
/// ignored. Throws InsufficientData unless the series covers n + 1 years.
RollingStats rolling_validate(const MatrixSeries& s, std::size_t periods_per_year,
                              std::size_t n_window_years, Eigen::Index k1, Eigen::Index k2,
                              Method method);

}  // namespace matfact
