#include "matfact/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matfact/numerics.hpp"

namespace matfact {

namespace {

void require_loading_dims(const MatrixSeries& s, const LoadingMatrix* row, const LoadingMatrix* col) {
  if (row && row->dim_p() != s.n_rows()) {
    throw Error(ErrorCode::DimError, "row loading has " + std::to_string(row->dim_p()) +
                                         " rows, series has p1=" + std::to_string(s.n_rows()));
  }
  if (col && col->dim_p() != s.n_cols()) {
    throw Error(ErrorCode::DimError, "column loading has " + std::to_string(col->dim_p()) +
                                         " rows, series has p2=" + std::to_string(s.n_cols()));
  }
}

void require_weights(const MatrixSeries& s, const HuberWeights* w) {
  if (w && static_cast<std::size_t>(w->w.size()) != s.t_len()) {
    throw Error(ErrorCode::DimError, "weight count does not match series length");
  }
}

// (1/(T q)) sum_t w_t Y_t Y_t^T with Y_t = X_t L, or X_t^T L when
// transpose is set. The transposed copy is materialized so that both sides
// run the same product kernel and M_r(s) equals M_c(s^T) exactly.
Matrix weighted_gram(const MatrixSeries& s, const Matrix& loading, const HuberWeights* w,
                     bool transpose) {
  require_weights(s, w);
  const auto p = transpose ? s.n_cols() : s.n_rows();
  const auto q = transpose ? s.n_rows() : s.n_cols();
  Matrix acc = Matrix::Zero(p, p);
  Matrix xt;
  for (std::size_t t = 0; t < s.t_len(); ++t) {
    Matrix y;
    if (transpose) {
      xt = s[t].transpose();
      y.noalias() = xt * loading;
    } else {
      y.noalias() = s[t] * loading;
    }
    if (w) {
      acc.noalias() += w->w(static_cast<Eigen::Index>(t)) * (y * y.transpose());
    } else {
      acc.noalias() += y * y.transpose();
    }
  }
  acc /= static_cast<double>(s.t_len()) * static_cast<double>(q);
  return 0.5 * (acc + acc.transpose());
}

Matrix weighted_mc(const MatrixSeries& s, const LoadingMatrix& col, const HuberWeights* w) {
  require_loading_dims(s, nullptr, &col);
  return weighted_gram(s, col.values(), w, false);
}

Matrix weighted_mr(const MatrixSeries& s, const LoadingMatrix& row, const HuberWeights* w) {
  require_loading_dims(s, &row, nullptr);
  return weighted_gram(s, row.values(), w, true);
}

void check_fit_inputs(const MatrixSeries& s, const FitConfig& cfg) {
  validate_series(s);
  cfg.validate();
  const auto t_len = static_cast<Eigen::Index>(s.t_len());
  if (cfg.k1 > std::min(s.n_rows(), t_len * s.n_cols()) ||
      cfg.k2 > std::min(s.n_cols(), t_len * s.n_rows())) {
    throw Error(ErrorCode::DimError, "factor numbers (" + std::to_string(cfg.k1) + ", " +
                                         std::to_string(cfg.k2) + ") exceed the data dimensions");
  }
}

double sweep_change(const LoadingPair& before, const LoadingPair& after) {
  return std::max(orthonormal_distance(before.row.orthonormal(), after.row.orthonormal()),
                  orthonormal_distance(before.col.orthonormal(), after.col.orthonormal()));
}

// Shared iteration for both estimators; tau absent means unit weights.
FactorFit iterate(const MatrixSeries& s, const FitConfig& cfg, LoadingPair current,
                  std::optional<double> tau) {
  int iters = 0;
  bool converged = false;
  while (iters < cfg.max_iters) {
    ++iters;
    LoadingPair next = [&] {
      if (tau) {
        const HuberWeights w = huber_weights(s, current.row, current.col, *tau);
        return projection_sweep(s, current, cfg.k1, cfg.k2, &w);
      }
      return projection_sweep(s, current, cfg.k1, cfg.k2, nullptr);
    }();
    const double change = sweep_change(current, next);
    current = std::move(next);
    if (change < cfg.tol) {
      converged = true;
      break;
    }
  }

  FactorScores scores = estimate_scores(s, current.row, current.col);
  FactorFit out{current.row, current.col,          std::move(scores), iters, converged, 0.0,
                tau ? Method::RMFA : Method::PE, tau,               false};
  if (tau) {
    const Vector r = residual_norms(s, current.row, current.col);
    double total = 0.0;
    for (Eigen::Index t = 0; t < r.size(); ++t) total += huber_loss(r(t), *tau);
    out.final_objective = total / static_cast<double>(s.t_len());
  } else {
    out.final_objective = least_squares_objective(s, current.row, current.col);
  }
  return out;
}

}  // namespace

LoadingPair alpha_pca_init(const MatrixSeries& s, Eigen::Index k1, Eigen::Index k2) {
  const auto p1 = s.n_rows();
  const auto p2 = s.n_cols();
  if (k1 < 1 || k1 > p1 || k2 < 1 || k2 > p2) {
    throw Error(ErrorCode::DimError, "alpha-PCA needs 1 <= k1 <= p1 and 1 <= k2 <= p2");
  }
  Matrix row_gram = Matrix::Zero(p1, p1);
  Matrix col_gram = Matrix::Zero(p2, p2);
  for (const Matrix& x : s) {
    row_gram.noalias() += x * x.transpose();
    col_gram.noalias() += x.transpose() * x;
  }
  const double scale = static_cast<double>(s.t_len()) * static_cast<double>(p1) * static_cast<double>(p2);
  row_gram /= scale;
  col_gram /= scale;
  row_gram = 0.5 * (row_gram + row_gram.transpose());
  col_gram = 0.5 * (col_gram + col_gram.transpose());
  return {LoadingMatrix::from_orthonormal(top_k_eig(row_gram, k1).vectors),
          LoadingMatrix::from_orthonormal(top_k_eig(col_gram, k2).vectors)};
}

Matrix build_mc(const MatrixSeries& s, const LoadingMatrix& col) { return weighted_mc(s, col, nullptr); }

Matrix build_mc(const MatrixSeries& s, const LoadingMatrix& col, const HuberWeights& w) {
  return weighted_mc(s, col, &w);
}

Matrix build_mr(const MatrixSeries& s, const LoadingMatrix& row) { return weighted_mr(s, row, nullptr); }

Matrix build_mr(const MatrixSeries& s, const LoadingMatrix& row, const HuberWeights& w) {
  return weighted_mr(s, row, &w);
}

FactorScores estimate_scores(const MatrixSeries& s, const LoadingMatrix& row,
                             const LoadingMatrix& col) {
  require_loading_dims(s, &row, &col);
  const double scale = static_cast<double>(s.n_rows()) * static_cast<double>(s.n_cols());
  FactorScores out;
  out.scores.reserve(s.t_len());
  for (const Matrix& x : s) {
    out.scores.emplace_back(row.values().transpose() * x * col.values() / scale);
  }
  return out;
}

Vector residual_norms(const MatrixSeries& s, const LoadingMatrix& row, const LoadingMatrix& col) {
  const FactorScores f = estimate_scores(s, row, col);
  Vector out(static_cast<Eigen::Index>(s.t_len()));
  for (std::size_t t = 0; t < s.t_len(); ++t) {
    out(static_cast<Eigen::Index>(t)) =
        (s[t] - row.values() * f[t] * col.values().transpose()).norm();
  }
  return out;
}

double median(Vector values) {
  const auto n = values.size();
  if (n == 0) throw Error(ErrorCode::DimError, "median of an empty sequence");
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values(n / 2);
  return 0.5 * (values(n / 2 - 1) + values(n / 2));
}

double compute_tau(const MatrixSeries& s, const LoadingMatrix& row, const LoadingMatrix& col) {
  const double tau = median(residual_norms(s, row, col));
  if (tau < 1e-12) {
    throw Error(ErrorCode::DegenerateTau, "median residual norm is " + std::to_string(tau));
  }
  return tau;
}

HuberWeights huber_weights(const MatrixSeries& s, const LoadingMatrix& row,
                           const LoadingMatrix& col, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::ConfigError, "tau must be positive");
  HuberWeights out;
  out.tau = tau;
  out.residuals = residual_norms(s, row, col);
  out.w.resize(out.residuals.size());
  for (Eigen::Index t = 0; t < out.w.size(); ++t) {
    const double r = out.residuals(t);
    out.w(t) = r <= tau ? 1.0 : tau / r;
  }
  return out;
}

Vector huber_weights_trace_form(const MatrixSeries& s, const LoadingMatrix& row,
                                const LoadingMatrix& col, double tau) {
  require_loading_dims(s, &row, &col);
  const double scale = static_cast<double>(s.n_rows()) * static_cast<double>(s.n_cols());
  const Matrix rrt = row.values() * row.values().transpose();
  const Matrix cct = col.values() * col.values().transpose();
  Vector out(static_cast<Eigen::Index>(s.t_len()));
  for (std::size_t t = 0; t < s.t_len(); ++t) {
    const Matrix& x = s[t];
    const double radicand =
        (x.transpose() * x).trace() - (x.transpose() * rrt * x * cct).trace() / scale;
    const double r = std::sqrt(std::max(radicand, 0.0));
    out(static_cast<Eigen::Index>(t)) = r <= tau ? 1.0 : tau / r;
  }
  return out;
}

double huber_loss(double x, double tau) {
  const double a = std::abs(x);
  return a <= tau ? a * a : 2.0 * tau * a - tau * tau;
}

double least_squares_objective(const MatrixSeries& s, const LoadingMatrix& row,
                               const LoadingMatrix& col) {
  return residual_norms(s, row, col).squaredNorm() / static_cast<double>(s.t_len());
}

LoadingPair projection_sweep(const MatrixSeries& s, const LoadingPair& current, Eigen::Index k1,
                             Eigen::Index k2, const HuberWeights* weights) {
  const Matrix mc = weighted_mc(s, current.col, weights);
  const Matrix mr = weighted_mr(s, current.row, weights);
  return {LoadingMatrix::from_orthonormal(top_k_eig(mc, k1).vectors),
          LoadingMatrix::from_orthonormal(top_k_eig(mr, k2).vectors)};
}

FactorFit fit_pe(const MatrixSeries& s, const FitConfig& cfg) {
  check_fit_inputs(s, cfg);
  return iterate(s, cfg, alpha_pca_init(s, cfg.k1, cfg.k2), std::nullopt);
}

FactorFit fit_rmfa(const MatrixSeries& s, const FitConfig& cfg) {
  check_fit_inputs(s, cfg);
  LoadingPair init = alpha_pca_init(s, cfg.k1, cfg.k2);
  double tau = 0.0;
  if (const auto* fixed = std::get_if<FixedTau>(&cfg.tau_rule)) {
    tau = fixed->value;
  } else {
    try {
      tau = compute_tau(s, init.row, init.col);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateTau) throw;
      FactorFit out = iterate(s, cfg, std::move(init), std::nullopt);
      out.tau_fallback = true;
      return out;
    }
  }
  return iterate(s, cfg, std::move(init), tau);
}

FactorFit fit(const MatrixSeries& s, const FitConfig& cfg, Method method) {
  return method == Method::PE ? fit_pe(s, cfg) : fit_rmfa(s, cfg);
}

}  // namespace matfact
