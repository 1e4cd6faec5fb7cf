#include "matfact/types.hpp"

#include <cmath>
#include <sstream>

namespace matfact {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DimError: return "DimError";
    case ErrorCode::DegenerateTau: return "DegenerateTau";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::CovNotPD: return "CovNotPD";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, EntryIndex entry)
    : Error(code, message) {
  entry_ = entry;
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : Error(code, message) {
  line_ = line;
}

void check_matrices(std::span<const Matrix> data) {
  if (data.empty()) {
    throw Error(ErrorCode::DimError, "matrix series is empty");
  }
  const auto rows = data.front().rows();
  const auto cols = data.front().cols();
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::DimError, "matrices must have at least one row and one column");
  }
  for (std::size_t t = 0; t < data.size(); ++t) {
    const Matrix& x = data[t];
    if (x.rows() != rows || x.cols() != cols) {
      std::ostringstream msg;
      msg << "matrix at t=" << t << " is " << x.rows() << "x" << x.cols() << ", expected "
          << rows << "x" << cols;
      throw Error(ErrorCode::ShapeMismatch, msg.str());
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!std::isfinite(x(i, j))) {
          std::ostringstream msg;
          msg << "non-finite entry at (t=" << t << ", i=" << i << ", j=" << j << ")";
          throw Error(ErrorCode::NonFinite, msg.str(),
                      EntryIndex{t, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
        }
      }
    }
  }
}

MatrixSeries::MatrixSeries(std::vector<Matrix> data) : data_(std::move(data)) {
  check_matrices(data_);
}

MatrixSeries MatrixSeries::transposed() const {
  std::vector<Matrix> out;
  out.reserve(data_.size());
  for (const auto& x : data_) out.emplace_back(x.transpose());
  return MatrixSeries(std::move(out));
}

MatrixSeries MatrixSeries::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > data_.size()) {
    throw Error(ErrorCode::DimError, "slice out of range");
  }
  return MatrixSeries(std::vector<Matrix>(data_.begin() + static_cast<std::ptrdiff_t>(first),
                                          data_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

void validate_series(std::span<const Matrix> data) {
  check_matrices(data);
  if (data.size() < 2) {
    throw Error(ErrorCode::DimError, "series needs T >= 2 observations");
  }
}

void validate_series(const MatrixSeries& s) { validate_series(std::span<const Matrix>(s.data())); }

void canonicalize_signs(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (m(best, j) < 0.0) m.col(j) = -m.col(j);
  }
}

LoadingMatrix LoadingMatrix::from_orthonormal(const Matrix& q) {
  if (q.cols() < 1 || q.cols() > q.rows()) {
    throw Error(ErrorCode::DimError, "loading must be p x k with 1 <= k <= p");
  }
  const double p = static_cast<double>(q.rows());
  Matrix values = std::sqrt(p) * q;
  canonicalize_signs(values);
  const Matrix gram = values.transpose() * values / p;
  const double dev = (gram - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= kIdentifiabilityTol)) {
    throw Error(ErrorCode::RankDeficient,
                "loading columns are not orthonormal (deviation " + std::to_string(dev) + ")");
  }
  return LoadingMatrix(std::move(values));
}

Matrix LoadingMatrix::orthonormal() const {
  return values_ / std::sqrt(static_cast<double>(values_.rows()));
}

LoadingMatrix normalize_loading(const Matrix& m) {
  const auto p = m.rows();
  const auto k = m.cols();
  if (k < 1 || k > p) {
    throw Error(ErrorCode::DimError, "normalize_loading needs a p x k input with 1 <= k <= p");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, "normalize_loading input has non-finite entries");
  }
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (!(sv(0) > 0.0) || sv(k - 1) < 1e-10 * sv(0)) {
    throw Error(ErrorCode::RankDeficient, "input has numerical rank below " + std::to_string(k));
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  const Matrix q = qr.householderQ() * Matrix::Identity(p, k);
  return LoadingMatrix::from_orthonormal(q);
}

void FitConfig::validate() const {
  if (k1 < 1 || k2 < 1) throw Error(ErrorCode::ConfigError, "k1 and k2 must be positive");
  if (max_iters < 1) throw Error(ErrorCode::ConfigError, "max_iters must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::ConfigError, "tol must be positive");
  if (const auto* fixed = std::get_if<FixedTau>(&tau_rule); fixed && !(fixed->value > 0.0)) {
    throw Error(ErrorCode::ConfigError, "fixed tau must be positive");
  }
}

Matrix FactorFit::common(std::size_t t) const {
  return row_loading.values() * scores[t] * col_loading.values().transpose();
}

MatrixSeries FactorFit::common_series() const {
  std::vector<Matrix> out;
  out.reserve(scores.size());
  for (std::size_t t = 0; t < scores.size(); ++t) out.push_back(common(t));
  return MatrixSeries(std::move(out));
}

}  // namespace matfact
