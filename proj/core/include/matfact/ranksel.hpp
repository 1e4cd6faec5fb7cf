#pragma once

#include <vector>

#include "matfact/types.hpp"

namespace matfact {

inline constexpr Eigen::Index kDefaultKMax = 10;
inline constexpr int kDefaultRankIters = 20;

struct EigenRatio {
  Eigen::Index k_hat = 1;
  Vector ratios;  // ratios(j-1) = lambda_j / (lambda_{j+1} + delta), j = 1..k_max
};

/// Eigenvalue-ratio rank estimate on a symmetric PSD matrix. The
/// denominator carries delta = 1e-10 * lambda_1; ties resolve to the
/// smallest j. Throws DimError unless k_max + 1 <= p, ZeroMatrix if
/// lambda_1 <= 0.
EigenRatio eigen_ratio(const Matrix& m, Eigen::Index k_max);

/// Same rule applied to eigenvalues already sorted in descending order.
EigenRatio eigen_ratio_from_values(const Vector& descending, Eigen::Index k_max);

struct RankEstimate {
  Eigen::Index k1_hat = 1;
  Eigen::Index k2_hat = 1;
  std::vector<Vector> ratio_trace_r;
  std::vector<Vector> ratio_trace_c;
  int n_iters = 0;
  bool converged = false;
};

/// Robust iterative eigenvalue-ratio selection of (k1, k2).
///
/// Starts from k1 = k2 = k_max with alpha-PCA loadings. Each iteration sets
/// tau from the current loadings (MedianResidual) or takes it from the rule,
/// weights the row covariance with the pre-iteration pair, picks k1 and
/// refreshes R from that matrix, then weights the column covariance with
/// (new R, old C), picks k2 and refreshes C. Stops once the pair repeats.
/// When the median residual is degenerate the iteration uses unit weights.
RankEstimate rit_er(const MatrixSeries& s, Eigen::Index k_max, int max_iters,
                    const TauRule& tau_rule = MedianResidual{});

/// Non-robust counterpart of rit_er: identical iteration with unit weights.
RankEstimate iter_er(const MatrixSeries& s, Eigen::Index k_max, int max_iters);

}  // namespace matfact
