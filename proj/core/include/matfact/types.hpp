#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "matfact/error.hpp"

namespace matfact {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raises ShapeMismatch or NonFinite for the first violation found, scanning
/// t, then columns, then rows. Does not check the length requirement.
void check_matrices(std::span<const Matrix> data);

/// Ordered sequence of equally-shaped, finite p1 x p2 matrices.
///
/// Construction accepts T >= 1 so that single-observation kernels can be
/// exercised; the estimators themselves require T >= 2 and enforce it through
/// validate_series().
class MatrixSeries {
 public:
  explicit MatrixSeries(std::vector<Matrix> data);

  std::size_t t_len() const noexcept { return data_.size(); }
  Eigen::Index n_rows() const noexcept { return data_.front().rows(); }
  Eigen::Index n_cols() const noexcept { return data_.front().cols(); }

  const Matrix& operator[](std::size_t t) const { return data_[t]; }
  const std::vector<Matrix>& data() const noexcept { return data_; }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  /// Series with every matrix transposed.
  MatrixSeries transposed() const;
  /// Contiguous sub-series [first, first + count).
  MatrixSeries slice(std::size_t first, std::size_t count) const;

 private:
  std::vector<Matrix> data_;
};

/// Full invariant check: shapes, finiteness and T >= 2.
void validate_series(std::span<const Matrix> data);
void validate_series(const MatrixSeries& s);

/// p x k loading matrix with (1/p) L^T L = I_k, columns in canonical sign.
class LoadingMatrix {
 public:
  static constexpr double kIdentifiabilityTol = 1e-8;

  /// Scales column-orthonormal vectors by sqrt(p) and applies the sign
  /// convention. Column order is kept as given.
  static LoadingMatrix from_orthonormal(const Matrix& q);

  const Matrix& values() const noexcept { return values_; }
  Eigen::Index dim_p() const noexcept { return values_.rows(); }
  Eigen::Index rank_k() const noexcept { return values_.cols(); }
  /// values() / sqrt(p), i.e. the column-orthonormal basis.
  Matrix orthonormal() const;

 private:
  explicit LoadingMatrix(Matrix values) : values_(std::move(values)) {}
  Matrix values_;
};

/// Flips the sign of each column so that its largest-magnitude entry is
/// positive. Ties go to the lowest row index.
void canonicalize_signs(Matrix& m);

/// sqrt(p) times an orthonormal basis of span(m), with canonical signs.
/// Throws RankDeficient when sigma_min < 1e-10 * sigma_max.
LoadingMatrix normalize_loading(const Matrix& m);

struct FactorScores {
  std::vector<Matrix> scores;

  std::size_t size() const noexcept { return scores.size(); }
  const Matrix& operator[](std::size_t t) const { return scores[t]; }
};

enum class Method { PE, RMFA };

/// Huber threshold selection.
struct MedianResidual {};
struct FixedTau {
  double value = 0.0;
};
using TauRule = std::variant<MedianResidual, FixedTau>;

struct FitConfig {
  Eigen::Index k1 = 1;
  Eigen::Index k2 = 1;
  int max_iters = 100;
  double tol = 1e-6;
  TauRule tau_rule = MedianResidual{};

  void validate() const;
};

struct FactorFit {
  LoadingMatrix row_loading;
  LoadingMatrix col_loading;
  FactorScores scores;
  int n_iters = 0;
  bool converged = false;
  double final_objective = 0.0;
  Method method = Method::PE;
  std::optional<double> tau;
  /// Set when RMFA was requested but tau was degenerate and PE ran instead.
  bool tau_fallback = false;

  /// R F_t C^T, recomputed from the stored loadings and scores.
  Matrix common(std::size_t t) const;
  MatrixSeries common_series() const;
};

}  // namespace matfact
