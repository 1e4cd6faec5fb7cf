#pragma once

#include "matfact/types.hpp"

namespace matfact {

/// Leading eigenpairs of a symmetric positive semi-definite matrix.
struct EigenPairs {
  Vector values;   // descending, clamped at zero
  Matrix vectors;  // p x k, orthonormal columns in canonical sign
};

/// Top-k eigenpairs of a symmetric PSD matrix. Vectors follow the loading
/// sign convention; eigenvalues in [-1e-10 * max(1, |lambda_1|), 0) are
/// clamped to zero.
///
/// Throws NotSymmetric if max |M - M^T| exceeds 1e-10 * max(1, max|M|), and
/// DimError unless M is square with 1 <= k <= p.
EigenPairs top_k_eig(const Matrix& m, Eigen::Index k);

/// All eigenvalues of a symmetric PSD matrix in descending order, same
/// clamping as top_k_eig.
Vector sorted_eigenvalues(const Matrix& m);

/// Kronecker product A (x) B.
Matrix kron(const Matrix& a, const Matrix& b);

/// Frobenius inner product <A, B> = Tr(A^T B).
double frobenius_inner(const Matrix& a, const Matrix& b);

/// sqrt(1 - Tr(Q1 Q1^T Q2 Q2^T) / max(q1, q2)) for inputs that already have
/// orthonormal columns, clamped into [0, 1]. Evaluated through projection
/// residuals so that equal spaces give 0 to rounding, not sqrt(eps).
double orthonormal_distance(const Matrix& q1, const Matrix& q2);

}  // namespace matfact
