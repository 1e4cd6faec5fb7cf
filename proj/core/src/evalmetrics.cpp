#include "matfact/evalmetrics.hpp"

#include <cmath>
#include <string>

#include "matfact/estimation.hpp"
#include "matfact/numerics.hpp"

namespace matfact {

Matrix orthonormal_basis(const Matrix& m) {
  const auto p = m.rows();
  const auto q = m.cols();
  if (q < 1 || q > p) throw Error(ErrorCode::RankDeficient, "basis needs 1 <= columns <= rows");
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (!(sv(0) > 0.0) || sv(q - 1) < 1e-10 * sv(0)) {
    throw Error(ErrorCode::RankDeficient, "columns are linearly dependent");
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(p, q);
}

double space_distance(const Matrix& q1, const Matrix& q2) {
  if (q1.rows() != q2.rows()) {
    throw Error(ErrorCode::DimError, "space_distance needs bases in the same ambient space");
  }
  return orthonormal_distance(orthonormal_basis(q1), orthonormal_basis(q2));
}

double common_mse(const MatrixSeries& est, const MatrixSeries& truth) {
  if (est.t_len() != truth.t_len() || est.n_rows() != truth.n_rows() ||
      est.n_cols() != truth.n_cols()) {
    throw Error(ErrorCode::DimError, "common_mse needs series of equal shape");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < est.t_len(); ++t) total += (est[t] - truth[t]).squaredNorm();
  return total / (static_cast<double>(est.t_len()) * static_cast<double>(est.n_rows()) *
                  static_cast<double>(est.n_cols()));
}

namespace {

double mean_of(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return v.empty() ? 0.0 : total / static_cast<double>(v.size());
}

}  // namespace

double RollingStats::mean_mse() const { return mean_of(mse_t); }

double RollingStats::mean_rho() const { return mean_of(rho_t); }

std::optional<double> RollingStats::mean_v() const {
  std::vector<double> present;
  for (const auto& v : v_t) {
    if (v) present.push_back(*v);
  }
  if (present.empty()) return std::nullopt;
  return mean_of(present);
}

RollingStats rolling_validate(const MatrixSeries& s, std::size_t periods_per_year,
                              std::size_t n_window_years, Eigen::Index k1, Eigen::Index k2,
                              Method method) {
  if (periods_per_year < 1 || n_window_years < 1) {
    throw Error(ErrorCode::ConfigError, "periods and window length must be positive");
  }
  const std::size_t years = s.t_len() / periods_per_year;
  if (years < n_window_years + 1) {
    throw Error(ErrorCode::InsufficientData,
                "need at least " + std::to_string((n_window_years + 1) * periods_per_year) +
                    " periods, have " + std::to_string(s.t_len()));
  }
  FitConfig cfg;
  cfg.k1 = k1;
  cfg.k2 = k2;

  const double cells = static_cast<double>(s.n_rows()) * static_cast<double>(s.n_cols());
  RollingStats out;
  out.window_years = n_window_years;
  std::optional<Matrix> previous_basis;
  for (std::size_t year = n_window_years; year < years; ++year) {
    const MatrixSeries train =
        s.slice((year - n_window_years) * periods_per_year, n_window_years * periods_per_year);
    const MatrixSeries test = s.slice(year * periods_per_year, periods_per_year);
    const FactorFit fitted = fit(train, cfg, method);
    const FactorScores scores = estimate_scores(test, fitted.row_loading, fitted.col_loading);

    Matrix mean = Matrix::Zero(s.n_rows(), s.n_cols());
    for (const Matrix& y : test) mean += y;
    mean /= static_cast<double>(periods_per_year);

    double sse = 0.0;
    double total_var = 0.0;
    for (std::size_t i = 0; i < periods_per_year; ++i) {
      const Matrix fitted_y =
          fitted.row_loading.values() * scores[i] * fitted.col_loading.values().transpose();
      sse += (fitted_y - test[i]).squaredNorm();
      total_var += (test[i] - mean).squaredNorm();
    }

    Matrix basis = kron(fitted.col_loading.orthonormal(), fitted.row_loading.orthonormal());
    out.year_index.push_back(year);
    out.mse_t.push_back(sse / (static_cast<double>(periods_per_year) * cells));
    out.rho_t.push_back(total_var > 0.0 ? sse / total_var : 0.0);
    out.v_t.push_back(previous_basis ? std::optional<double>(space_distance(basis, *previous_basis))
                                     : std::nullopt);
    previous_basis = std::move(basis);
  }
  return out;
}

}  // namespace matfact
