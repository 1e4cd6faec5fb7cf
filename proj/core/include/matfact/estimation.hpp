#pragma once

#include "matfact/types.hpp"

namespace matfact {

/// Per-observation Huber weights together with the residual norms and
/// threshold that produced them.
struct HuberWeights {
  Vector w;          // in (0, 1]
  double tau = 0.0;
  Vector residuals;  // ||X_t - R F_t C^T||_F
};

struct LoadingPair {
  LoadingMatrix row;
  LoadingMatrix col;
};

/// alpha-PCA with alpha = 0: leading eigenvectors of the row and column
/// second-moment matrices (1/(T p1 p2)) sum X_t X_t^T and sum X_t^T X_t.
LoadingPair alpha_pca_init(const MatrixSeries& s, Eigen::Index k1, Eigen::Index k2);

/// (1/(T p2)) sum_t w_t X_t C C^T X_t^T, symmetrized. Unit weights when
/// none are given.
Matrix build_mc(const MatrixSeries& s, const LoadingMatrix& col);
Matrix build_mc(const MatrixSeries& s, const LoadingMatrix& col, const HuberWeights& w);

/// (1/(T p1)) sum_t w_t X_t^T R R^T X_t, symmetrized.
Matrix build_mr(const MatrixSeries& s, const LoadingMatrix& row);
Matrix build_mr(const MatrixSeries& s, const LoadingMatrix& row, const HuberWeights& w);

/// F_t = R^T X_t C / (p1 p2) for every t.
FactorScores estimate_scores(const MatrixSeries& s, const LoadingMatrix& row,
                             const LoadingMatrix& col);

/// ||X_t - R F_t C^T||_F for every t, F_t from estimate_scores.
Vector residual_norms(const MatrixSeries& s, const LoadingMatrix& row, const LoadingMatrix& col);

/// Median with the mean-of-central-pair convention for even lengths.
double median(Vector values);

/// Median residual norm at the given loadings. Throws DegenerateTau when it
/// is below 1e-12.
double compute_tau(const MatrixSeries& s, const LoadingMatrix& row, const LoadingMatrix& col);

HuberWeights huber_weights(const MatrixSeries& s, const LoadingMatrix& row,
                           const LoadingMatrix& col, double tau);

/// Same weights evaluated through
///   tau / sqrt(Tr(X^T X) - Tr(X^T R R^T X C C^T) / (p1 p2)).
/// Only used to cross-check huber_weights().
Vector huber_weights_trace_form(const MatrixSeries& s, const LoadingMatrix& row,
                                const LoadingMatrix& col, double tau);

/// H(x) = x^2 for |x| <= tau, 2 tau |x| - tau^2 otherwise.
double huber_loss(double x, double tau);

/// (1/T) sum_t ||X_t - R F_t C^T||_F^2 with F_t from estimate_scores.
double least_squares_objective(const MatrixSeries& s, const LoadingMatrix& row,
                               const LoadingMatrix& col);

/// One projected update of both loadings from the same pre-sweep pair:
/// R <- sqrt(p1) top-k1 eigvecs of M_c(C), C <- sqrt(p2) top-k2 eigvecs of
/// M_r(R). Passing weights gives the Huber-weighted variant.
LoadingPair projection_sweep(const MatrixSeries& s, const LoadingPair& current, Eigen::Index k1,
                             Eigen::Index k2, const HuberWeights* weights = nullptr);

/// Least-squares projected estimation, iterated until the loading spaces
/// move by less than cfg.tol or cfg.max_iters sweeps have run.
FactorFit fit_pe(const MatrixSeries& s, const FitConfig& cfg);

/// Huber-weighted iterative projection. Tau is fixed once, from the
/// alpha-PCA initializer or from the config. A degenerate tau falls back
/// to fit_pe and sets FactorFit::tau_fallback.
FactorFit fit_rmfa(const MatrixSeries& s, const FitConfig& cfg);

/// Dispatches to fit_pe or fit_rmfa.
FactorFit fit(const MatrixSeries& s, const FitConfig& cfg, Method method);

}  // namespace matfact
