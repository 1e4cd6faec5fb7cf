#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "matfact/error.hpp"
#include "matfact/types.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace matfact;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no matfact::Error thrown";
  return ErrorCode::ConfigError;
}

}  // namespace

TEST(ValidateSeries, AcceptsWellFormed) {
  std::vector<Matrix> xs(3, Matrix::Ones(2, 2));
  EXPECT_NO_THROW(validate_series(xs));
}

TEST(ValidateSeries, ShapeMismatch) {
  std::vector<Matrix> xs{Matrix::Ones(2, 2), Matrix::Ones(2, 3), Matrix::Ones(2, 2)};
  EXPECT_EQ(code_of([&] { validate_series(xs); }), ErrorCode::ShapeMismatch);
}

TEST(ValidateSeries, NonFiniteReportsFirstEntry) {
  std::vector<Matrix> xs(3, Matrix::Ones(2, 2));
  xs[0](1, 0) = std::numeric_limits<double>::quiet_NaN();
  xs[2](0, 0) = std::numeric_limits<double>::infinity();
  try {
    validate_series(xs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
    ASSERT_TRUE(e.entry().has_value());
    EXPECT_EQ(*e.entry(), (EntryIndex{0, 1, 0}));
  }
}

TEST(ValidateSeries, NeedsTwoPeriods) {
  std::vector<Matrix> xs(1, Matrix::Ones(2, 2));
  EXPECT_EQ(code_of([&] { validate_series(xs); }), ErrorCode::DimError);
  EXPECT_EQ(code_of([&] { validate_series(std::vector<Matrix>{}); }), ErrorCode::DimError);
}

TEST(MatrixSeries, TransposeAndSlice) {
  testgen::Gen g(3);
  MatrixSeries s(g.normal_series(3, 4, 5));
  auto st = s.transposed();
  EXPECT_EQ(st.n_rows(), 4);
  EXPECT_EQ(st.n_cols(), 3);
  EXPECT_EQ(st[2], s[2].transpose());
  auto sl = s.slice(1, 3);
  EXPECT_EQ(sl.t_len(), 3u);
  EXPECT_EQ(sl[0], s[1]);
}

TEST(NormalizeLoading, AlreadyNormalized) {
  const double r3 = std::sqrt(3.0);
  Matrix m = r3 * Matrix::Identity(3, 2);
  EXPECT_LE((normalize_loading(m).values() - m).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NormalizeLoading, ScaleDropsOut) {
  const double r3 = std::sqrt(3.0);
  Matrix m = 2.0 * r3 * Matrix::Identity(3, 2);
  Matrix want = r3 * Matrix::Identity(3, 2);
  EXPECT_LE((normalize_loading(m).values() - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NormalizeLoading, RandomMatchesGramSchmidtSpace) {
  testgen::Gen g(11);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix m = g.normal_matrix(5, 2);
    auto out = normalize_loading(m);
    Matrix gram = out.values().transpose() * out.values() / 5.0;
    EXPECT_LE((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(oracle::distance(out.values() / std::sqrt(5.0), oracle::gram_schmidt(m)), 1e-7);
  }
}

TEST(NormalizeLoading, Errors) {
  Matrix m(3, 2);
  m << 1, 2, 2, 4, 3, 6;
  EXPECT_EQ(code_of([&] { normalize_loading(m); }), ErrorCode::RankDeficient);
  EXPECT_EQ(code_of([&] { normalize_loading(Matrix::Ones(2, 3)); }), ErrorCode::DimError);
  Matrix bad = Matrix::Identity(3, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { normalize_loading(bad); }), ErrorCode::NonFinite);
}

TEST(NormalizeLoading, SignConvention) {
  testgen::Gen g(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto out = normalize_loading(g.normal_matrix(6, 3)).values();
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      Eigen::Index arg = 0;
      out.col(j).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(out(arg, j), 0.0);
    }
  }
}

TEST(NormalizeLoadingProperty, Idempotent) {
  testgen::Gen g(21);
  for (int rep = 0; rep < 100; ++rep) {
    const int p = g.integer(2, 12), k = g.integer(1, p);
    auto once = normalize_loading(g.normal_matrix(p, k));
    auto twice = normalize_loading(once.values());
    EXPECT_LE((once.values() - twice.values()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(NormalizeLoadingProperty, SpanAndRightMultiplication) {
  testgen::Gen g(22);
  for (int rep = 0; rep < 100; ++rep) {
    const int p = g.integer(2, 12), k = g.integer(1, p);
    Matrix m = g.normal_matrix(p, k);
    Matrix a = g.normal_matrix(k, k) + 3.0 * Matrix::Identity(k, k);
    auto out = normalize_loading(m);
    auto mixed = normalize_loading(m * a);
    const double rp = std::sqrt(static_cast<double>(p));
    EXPECT_LE(oracle::distance(out.values() / rp, m), 1e-7);
    EXPECT_LE(oracle::distance(out.values(), mixed.values()), 1e-7);
  }
}

TEST(LoadingMatrix, RejectsNonOrthonormal) {
  EXPECT_EQ(code_of([] { LoadingMatrix::from_orthonormal(Matrix::Ones(3, 2)); }),
            ErrorCode::RankDeficient);
}

TEST(FitConfig, Validation) {
  FitConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.k1 = 0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::ConfigError);
  cfg = FitConfig{};
  cfg.tol = -1;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::ConfigError);
  cfg = FitConfig{};
  cfg.tau_rule = FixedTau{0.0};
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::ConfigError);
}

TEST(Error, MessageCarriesCode) {
  Error e(ErrorCode::ParseError, "bad field", std::size_t{7});
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), std::optional<std::size_t>{7});
  EXPECT_NE(std::string(e.what()).find("ParseError"), std::string::npos);
}
