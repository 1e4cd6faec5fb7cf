#include "matfact/ranksel.hpp"

#include <optional>
#include <string>

#include "matfact/estimation.hpp"
#include "matfact/numerics.hpp"

namespace matfact {

EigenRatio eigen_ratio_from_values(const Vector& descending, Eigen::Index k_max) {
  if (k_max < 1 || k_max + 1 > descending.size()) {
    throw Error(ErrorCode::DimError, "eigen_ratio needs 1 <= k_max and k_max + 1 <= p (k_max=" +
                                         std::to_string(k_max) + ", p=" +
                                         std::to_string(descending.size()) + ")");
  }
  const double top = descending(0);
  if (!(top > 0.0)) throw Error(ErrorCode::ZeroMatrix, "leading eigenvalue is not positive");
  const double delta = 1e-10 * top;
  EigenRatio out;
  out.ratios.resize(k_max);
  double best = -1.0;
  for (Eigen::Index j = 0; j < k_max; ++j) {
    out.ratios(j) = descending(j) / (descending(j + 1) + delta);
    if (out.ratios(j) > best) {
      best = out.ratios(j);
      out.k_hat = j + 1;
    }
  }
  return out;
}

EigenRatio eigen_ratio(const Matrix& m, Eigen::Index k_max) {
  if (m.rows() != m.cols() || k_max < 1 || k_max + 1 > m.rows()) {
    throw Error(ErrorCode::DimError, "eigen_ratio needs a square p x p matrix with k_max + 1 <= p");
  }
  return eigen_ratio_from_values(sorted_eigenvalues(m), k_max);
}

namespace {

enum class Weighting { Huber, Unit };

// Weights for one covariance build. Unit weights are returned as nullopt so
// that the unweighted accumulation path is taken.
std::optional<HuberWeights> weights_for(const MatrixSeries& s, const LoadingMatrix& row,
                                        const LoadingMatrix& col, std::optional<double> tau) {
  if (!tau) return std::nullopt;
  return huber_weights(s, row, col, *tau);
}

RankEstimate iterate_ranks(const MatrixSeries& s, Eigen::Index k_max, int max_iters,
                           Weighting weighting, const TauRule& tau_rule) {
  validate_series(s);
  if (k_max < 1 || k_max + 1 > std::min(s.n_rows(), s.n_cols())) {
    throw Error(ErrorCode::DimError, "rank selection needs k_max + 1 <= min(p1, p2)");
  }
  if (max_iters < 1) throw Error(ErrorCode::ConfigError, "max_iters must be >= 1");

  RankEstimate out;
  out.k1_hat = k_max;
  out.k2_hat = k_max;
  LoadingPair current = alpha_pca_init(s, k_max, k_max);

  for (int iter = 1; iter <= max_iters; ++iter) {
    std::optional<double> tau;
    if (weighting == Weighting::Huber) {
      if (const auto* fixed = std::get_if<FixedTau>(&tau_rule)) {
        tau = fixed->value;
      } else {
        try {
          tau = compute_tau(s, current.row, current.col);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DegenerateTau) throw;
        }
      }
    }

    const auto w_row = weights_for(s, current.row, current.col, tau);
    const Matrix mc = w_row ? build_mc(s, current.col, *w_row) : build_mc(s, current.col);
    const EigenRatio row_ratio = eigen_ratio(mc, k_max);
    LoadingMatrix new_row = LoadingMatrix::from_orthonormal(top_k_eig(mc, row_ratio.k_hat).vectors);

    const auto w_col = weights_for(s, new_row, current.col, tau);
    const Matrix mr = w_col ? build_mr(s, new_row, *w_col) : build_mr(s, new_row);
    const EigenRatio col_ratio = eigen_ratio(mr, k_max);
    LoadingMatrix new_col = LoadingMatrix::from_orthonormal(top_k_eig(mr, col_ratio.k_hat).vectors);

    out.ratio_trace_r.push_back(row_ratio.ratios);
    out.ratio_trace_c.push_back(col_ratio.ratios);
    out.n_iters = iter;

    const bool repeated = row_ratio.k_hat == out.k1_hat && col_ratio.k_hat == out.k2_hat;
    out.k1_hat = row_ratio.k_hat;
    out.k2_hat = col_ratio.k_hat;
    current = LoadingPair{std::move(new_row), std::move(new_col)};
    if (repeated) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

RankEstimate rit_er(const MatrixSeries& s, Eigen::Index k_max, int max_iters,
                    const TauRule& tau_rule) {
  if (const auto* fixed = std::get_if<FixedTau>(&tau_rule); fixed && !(fixed->value > 0.0)) {
    throw Error(ErrorCode::ConfigError, "fixed tau must be positive");
  }
  return iterate_ranks(s, k_max, max_iters, Weighting::Huber, tau_rule);
}

RankEstimate iter_er(const MatrixSeries& s, Eigen::Index k_max, int max_iters) {
  return iterate_ranks(s, k_max, max_iters, Weighting::Unit, MedianResidual{});
}

}  // namespace matfact
