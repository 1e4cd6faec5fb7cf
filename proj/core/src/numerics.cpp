#include "matfact/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace matfact {

namespace {

void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::DimError, "eigendecomposition needs a non-empty square matrix");
  }
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw Error(ErrorCode::NotSymmetric, "max asymmetry " + std::to_string(asym));
  }
}

double clamp_eigenvalue(double value, double top) {
  if (value < 0.0 && value >= -1e-10 * std::max(1.0, std::abs(top))) return 0.0;
  return value;
}

}  // namespace

EigenPairs top_k_eig(const Matrix& m, Eigen::Index k) {
  check_symmetric(m);
  const auto p = m.rows();
  if (k < 1 || k > p) {
    throw Error(ErrorCode::DimError,
                "requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(p) + "x" +
                    std::to_string(p) + " matrix");
  }
  // Solver returns ascending order; the symmetric part is used so that
  // sub-tolerance asymmetry cannot leak into the result.
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFinite, "eigensolver failed to converge");
  }
  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(p, k);
  const double top = solver.eigenvalues()(p - 1);
  for (Eigen::Index c = 0; c < k; ++c) {
    out.values(c) = clamp_eigenvalue(solver.eigenvalues()(p - 1 - c), top);
    out.vectors.col(c) = solver.eigenvectors().col(p - 1 - c);
  }
  canonicalize_signs(out.vectors);
  return out;
}

Vector sorted_eigenvalues(const Matrix& m) {
  check_symmetric(m);
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  const auto p = m.rows();
  Vector out(p);
  const double top = solver.eigenvalues()(p - 1);
  for (Eigen::Index c = 0; c < p; ++c) out(c) = clamp_eigenvalue(solver.eigenvalues()(p - 1 - c), top);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimError, "frobenius_inner shape mismatch");
  }
  return a.cwiseProduct(b).sum();
}

}  // namespace matfact

namespace matfact {

double orthonormal_distance(const Matrix& q1, const Matrix& q2) {
  if (q1.rows() != q2.rows()) {
    throw Error(ErrorCode::DimError, "subspace distance needs bases of equal ambient dimension");
  }
  // 1 - ||Q1^T Q2||^2 / q cancels badly near zero, so evaluate it through
  // the part of the thinner basis lying outside the wider one:
  //   q - ||Q1^T Q2||^2 = (q - k_small) + ||(I - P_wide) Q_small||^2.
  auto outside = [](const Matrix& wide, const Matrix& thin) {
    return (thin - wide * (wide.transpose() * thin)).squaredNorm();
  };
  const auto k1 = q1.cols();
  const auto k2 = q2.cols();
  double excess = 0.0;
  if (k1 > k2) {
    excess = static_cast<double>(k1 - k2) + outside(q1, q2);
  } else if (k2 > k1) {
    excess = static_cast<double>(k2 - k1) + outside(q2, q1);
  } else {
    excess = 0.5 * (outside(q1, q2) + outside(q2, q1));
  }
  const double q = static_cast<double>(std::max(k1, k2));
  return std::sqrt(std::clamp(excess / q, 0.0, 1.0));
}

}  // namespace matfact
