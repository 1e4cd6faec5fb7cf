#pragma once

#include <cstdint>
#include <variant>

#include "matfact/rng.hpp"
#include "matfact/types.hpp"

namespace matfact {

struct MatrixNormal {};
struct MatrixT {
  int nu = 3;
};
using ErrorDist = std::variant<MatrixNormal, MatrixT>;

/// One synthetic experiment: X_t = R0 F_t C0^T + E_t with AR(1) factors and
/// AR(1) errors driven by matrix-normal or matrix-t innovations.
struct DgpConfig {
  Eigen::Index p1 = 20;
  Eigen::Index p2 = 20;
  std::size_t t_len = 20;
  Eigen::Index k1 = 3;
  Eigen::Index k2 = 3;
  double phi = 0.1;  // factor AR coefficient
  double psi = 0.1;  // error AR coefficient
  ErrorDist dist = MatrixNormal{};
  std::uint64_t seed = 0;
  int burn_in = 50;
  /// Skip the error draws entirely and return X = S0.
  bool noise_free = false;

  void validate() const;
};

struct GroundTruth {
  Matrix r0;  // p1 x k1, not normalized
  Matrix c0;  // p2 x k2, not normalized
  FactorScores f0;
  MatrixSeries s0;  // R0 F_t C0^T
  MatrixSeries e;   // idiosyncratic errors, zero when noise_free
  MatrixSeries x;   // x[t] = s0[t] + e[t], evaluated once
};

/// Unit diagonal, 1/p off the diagonal.
Matrix error_cov(Eigen::Index p);

/// i.i.d. Uniform(-1, 1) entries, filled column-major.
Matrix gen_loadings(Eigen::Index p, Eigen::Index k, Rng& rng);

/// vec(F_t) = phi vec(F_{t-1}) + sqrt(1 - phi^2) eps_t with standard normal
/// eps_t. Starts from a standard normal draw and discards burn_in steps.
FactorScores gen_factors(const DgpConfig& cfg, Rng& rng);

/// vec(E_t) = psi vec(E_{t-1}) + sqrt(1 - psi^2) vec(U_t) with U_t drawn
/// from MN(0, U_E, V_E) or t_{p1,p2}(nu, 0, U_E, V_E). Starts from an
/// innovation draw and discards burn_in steps.
MatrixSeries gen_errors(const DgpConfig& cfg, Rng& rng);

/// U = A G B^T with A A^T = row_cov, B B^T = col_cov and G i.i.d. normal
/// (column-major), so that vec(U) ~ N(0, col_cov (x) row_cov). Arguments are
/// the lower Cholesky factors.
Matrix draw_matrix_normal(const Matrix& row_chol, const Matrix& col_chol, Rng& rng);

/// Matrix-variate t via the Wishart mixture U = S^{-1/2} Z with
/// S ~ W_p1(nu + p1 - 1, row_cov^{-1}) and Z ~ MN(0, I, col_cov).
/// inv_row_chol is the lower Cholesky factor of row_cov^{-1}.
Matrix draw_matrix_t(int nu, const Matrix& inv_row_chol, const Matrix& col_chol, Rng& rng);

/// Bartlett construction of W_p(dof, scale) from the lower Cholesky factor
/// of scale. Draw order: diagonal chi-squares top to bottom, then the
/// strictly lower normals column-major.
Matrix draw_wishart(int dof, const Matrix& scale_chol, Rng& rng);

/// Full dataset from cfg.seed. One stream is consumed in the order
/// R0, C0, factors, errors.
GroundTruth gen_dataset(const DgpConfig& cfg);

}  // namespace matfact
