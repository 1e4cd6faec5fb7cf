#include "matfact/datagen.hpp"

#include <cmath>
#include <string>

namespace matfact {

namespace {

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.normal();
  }
  return out;
}

Matrix lower_cholesky(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::CovNotPD, std::string(what) + " is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

void DgpConfig::validate() const {
  if (p1 < 1 || p2 < 1 || t_len < 1 || k1 < 1 || k2 < 1) {
    throw Error(ErrorCode::ConfigError, "dimensions must be positive");
  }
  if (k1 > p1 || k2 > p2) throw Error(ErrorCode::ConfigError, "need k1 <= p1 and k2 <= p2");
  if (!(std::abs(phi) < 1.0) || !(std::abs(psi) < 1.0)) {
    throw Error(ErrorCode::ConfigError, "AR coefficients must satisfy |phi| < 1 and |psi| < 1");
  }
  if (const auto* t = std::get_if<MatrixT>(&dist); t && t->nu < 3) {
    throw Error(ErrorCode::ConfigError, "matrix-t degrees of freedom must be >= 3");
  }
  if (burn_in < 0) throw Error(ErrorCode::ConfigError, "burn_in must be nonnegative");
}

Matrix error_cov(Eigen::Index p) {
  Matrix out = Matrix::Constant(p, p, 1.0 / static_cast<double>(p));
  out.diagonal().setOnes();
  return out;
}

Matrix gen_loadings(Eigen::Index p, Eigen::Index k, Rng& rng) {
  Matrix out(p, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) out(i, j) = rng.uniform(-1.0, 1.0);
  }
  return out;
}

FactorScores gen_factors(const DgpConfig& cfg, Rng& rng) {
  cfg.validate();
  const double innov = std::sqrt(1.0 - cfg.phi * cfg.phi);
  Matrix f = standard_normal(cfg.k1, cfg.k2, rng);
  for (int b = 0; b < cfg.burn_in; ++b) {
    f = cfg.phi * f + innov * standard_normal(cfg.k1, cfg.k2, rng);
  }
  FactorScores out;
  out.scores.reserve(cfg.t_len);
  for (std::size_t t = 0; t < cfg.t_len; ++t) {
    f = cfg.phi * f + innov * standard_normal(cfg.k1, cfg.k2, rng);
    out.scores.push_back(f);
  }
  return out;
}

Matrix draw_matrix_normal(const Matrix& row_chol, const Matrix& col_chol, Rng& rng) {
  const Matrix g = standard_normal(row_chol.rows(), col_chol.rows(), rng);
  return row_chol.triangularView<Eigen::Lower>() * g * col_chol.transpose();
}

Matrix draw_wishart(int dof, const Matrix& scale_chol, Rng& rng) {
  const auto p = scale_chol.rows();
  if (dof < p) throw Error(ErrorCode::ConfigError, "Wishart dof must be >= dimension");
  Matrix a = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(rng.chi_square(dof - static_cast<int>(i)));
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j + 1; i < p; ++i) a(i, j) = rng.normal();
  }
  const Matrix la = scale_chol.triangularView<Eigen::Lower>() * a;
  return la * la.transpose();
}

Matrix draw_matrix_t(int nu, const Matrix& inv_row_chol, const Matrix& col_chol, Rng& rng) {
  const auto p1 = inv_row_chol.rows();
  const Matrix s = draw_wishart(nu + static_cast<int>(p1) - 1, inv_row_chol, rng);
  const Matrix z = standard_normal(p1, col_chol.rows(), rng) * col_chol.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  return eig.operatorInverseSqrt() * z;
}

MatrixSeries gen_errors(const DgpConfig& cfg, Rng& rng) {
  cfg.validate();
  const Matrix row_cov = error_cov(cfg.p1);
  const Matrix col_chol = lower_cholesky(error_cov(cfg.p2), "V_E");
  const Matrix row_chol = lower_cholesky(row_cov, "U_E");
  Matrix inv_row_chol;
  const auto* t_dist = std::get_if<MatrixT>(&cfg.dist);
  if (t_dist) inv_row_chol = lower_cholesky(row_cov.inverse(), "U_E^{-1}");

  auto innovation = [&]() -> Matrix {
    if (t_dist) return draw_matrix_t(t_dist->nu, inv_row_chol, col_chol, rng);
    return draw_matrix_normal(row_chol, col_chol, rng);
  };

  const double scale = std::sqrt(1.0 - cfg.psi * cfg.psi);
  Matrix e = innovation();
  for (int b = 0; b < cfg.burn_in; ++b) e = cfg.psi * e + scale * innovation();
  std::vector<Matrix> out;
  out.reserve(cfg.t_len);
  for (std::size_t t = 0; t < cfg.t_len; ++t) {
    e = cfg.psi * e + scale * innovation();
    out.push_back(e);
  }
  return MatrixSeries(std::move(out));
}

GroundTruth gen_dataset(const DgpConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Matrix r0 = gen_loadings(cfg.p1, cfg.k1, rng);
  Matrix c0 = gen_loadings(cfg.p2, cfg.k2, rng);
  FactorScores f0 = gen_factors(cfg, rng);

  std::vector<Matrix> common;
  common.reserve(cfg.t_len);
  for (const Matrix& f : f0.scores) common.push_back(r0 * f * c0.transpose());
  MatrixSeries s0(common);

  if (cfg.noise_free) {
    std::vector<Matrix> zeros(cfg.t_len, Matrix::Zero(cfg.p1, cfg.p2));
    return GroundTruth{std::move(r0), std::move(c0), std::move(f0), s0,
                       MatrixSeries(std::move(zeros)), s0};
  }
  MatrixSeries errors = gen_errors(cfg, rng);
  std::vector<Matrix> x = std::move(common);
  for (std::size_t t = 0; t < cfg.t_len; ++t) x[t] += errors[t];
  return GroundTruth{std::move(r0), std::move(c0), std::move(f0), std::move(s0),
                     std::move(errors), MatrixSeries(std::move(x))};
}

}  // namespace matfact
