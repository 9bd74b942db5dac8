#include <cmath>
#include <limits>

#include "test_support.hpp"

using namespace geninv;
using geninv::testing::adj;
using geninv::testing::random_matrix;
using geninv::testing::random_rank;

TEST(ComplexMatrix, ShapeAndEntries) {
  const ComplexMatrix a = ComplexMatrix::from_rows({{1, 2, 3}, {4, 5, Complex(6, -1)}});
  EXPECT_EQ(a.rows(), 2);
  EXPECT_EQ(a.cols(), 3);
  EXPECT_EQ(a(1, 2), Complex(6, -1));
  EXPECT_FALSE(a.is_square());
  EXPECT_TRUE(ComplexMatrix::zero(2, 2).is_zero());
  EXPECT_FALSE(ComplexMatrix::identity(2).is_zero());
}

TEST(ComplexMatrix, EmptyShapesAreValues) {
  const ComplexMatrix e(0, 3);
  EXPECT_TRUE(e.empty());
  EXPECT_EQ(e.cols(), 3);
  const ComplexMatrix p = ComplexMatrix(2, 0) * e;
  EXPECT_EQ(p.rows(), 2);
  EXPECT_EQ(p.cols(), 3);
  EXPECT_TRUE(p.is_zero());
}

TEST(ComplexMatrix, RejectsBadConstruction) {
  EXPECT_THROW(ComplexMatrix(2, 2, {1, 2, 3}), ShapeError);
  EXPECT_THROW(ComplexMatrix(-1, 2), ShapeError);
  EXPECT_THROW(ComplexMatrix::from_rows({{1, 2}, {3}}), ShapeError);
  EXPECT_THROW(ComplexMatrix(1, 1, {std::numeric_limits<double>::quiet_NaN()}), NumericError);
  EXPECT_THROW(ComplexMatrix(1, 1, {Complex(0, std::numeric_limits<double>::infinity())}), NumericError);
}

TEST(Arithmetic, ShapesAreChecked) {
  const ComplexMatrix a(2, 3), b(2, 3), c(3, 4);
  EXPECT_THROW(a * b, ShapeError);
  EXPECT_THROW(a + c, ShapeError);
  EXPECT_THROW(a - c, ShapeError);
  EXPECT_EQ((a * c).cols(), 4);
}

TEST(Arithmetic, ConjugateTranspose) {
  const ComplexMatrix a = ComplexMatrix::from_rows({{Complex(1, 2), 3}, {0, Complex(0, -1)}, {5, 6}});
  const ComplexMatrix h = conjugate_transpose(a);
  EXPECT_EQ(h.rows(), 2);
  EXPECT_EQ(h(0, 0), Complex(1, -2));
  EXPECT_EQ(h(1, 1), Complex(0, 1));
  EXPECT_EQ(h(0, 2), Complex(5, 0));
  EXPECT_EQ(conjugate_transpose(h).dense(), a.dense());
}

TEST(Norms, KnownValues) {
  const ComplexMatrix d = ComplexMatrix::from_rows({{3, 0}, {0, Complex(0, -4)}});
  EXPECT_DOUBLE_EQ(frobenius_norm(d), 5.0);
  EXPECT_NEAR(spectral_norm(d), 4.0, 1e-14);
  EXPECT_DOUBLE_EQ(spectral_norm(ComplexMatrix(0, 0)), 0.0);
  // Denominator is max(1, ||a||, ||b||).
  EXPECT_DOUBLE_EQ(relative_distance(ComplexMatrix::from_rows({{0.5}}), ComplexMatrix::from_rows({{0.25}})), 0.25);
  EXPECT_DOUBLE_EQ(relative_distance(ComplexMatrix::from_rows({{10}}), ComplexMatrix::from_rows({{5}})), 0.5);
}

TEST(SVD, FactorsReconstruct) {
  std::mt19937_64 rng(3);
  for (auto [m, n] : {std::pair<Index, Index>{5, 3}, {3, 5}, {4, 4}, {1, 6}}) {
    const ComplexMatrix a = random_matrix(m, n, rng);
    const SVDResult s = svd(a);
    ASSERT_EQ(static_cast<Index>(s.singular_values.size()), std::min(m, n));
    EXPECT_TRUE(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
    DenseMatrix sigma = DenseMatrix::Zero(m, n);
    for (Index i = 0; i < std::min(m, n); ++i) sigma(i, i) = s.singular_values[static_cast<std::size_t>(i)];
    EXPECT_MATRIX_NEAR(s.u * ComplexMatrix(sigma) * adj(s.v), a, 1e-13);
    EXPECT_MATRIX_NEAR(adj(s.u) * s.u, ComplexMatrix::identity(m), 1e-13);
    EXPECT_MATRIX_NEAR(adj(s.v) * s.v, ComplexMatrix::identity(n), 1e-13);
    EXPECT_NEAR(s.singular_values.front(), spectral_norm(a), 1e-12);
  }
}

TEST(SVD, DiagonalSingularValues) {
  const std::vector<double> sv = singular_values(ComplexMatrix::from_rows({{0, 2, 0}, {Complex(0, 7), 0, 0}}));
  ASSERT_EQ(sv.size(), 2u);
  EXPECT_NEAR(sv[0], 7.0, 1e-14);
  EXPECT_NEAR(sv[1], 2.0, 1e-14);
}

TEST(QR, PivotedFactorization) {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = random_rank(6, 5, 3, rng);
  const QRResult qr = qr_column_pivoted(a);
  DenseMatrix ap(6, 5);
  for (Index j = 0; j < 5; ++j) ap.col(j) = a.dense().col(qr.permutation[static_cast<std::size_t>(j)]);
  EXPECT_MATRIX_NEAR(qr.q * qr.r, ComplexMatrix(ap), 1e-13);
  EXPECT_MATRIX_NEAR(adj(qr.q) * qr.q, ComplexMatrix::identity(6), 1e-13);
  for (Index i = 1; i < 5; ++i) {
    EXPECT_GE(std::abs(qr.r(i - 1, i - 1)) + 1e-12, std::abs(qr.r(i, i)));
    for (Index j = 0; j < i; ++j) EXPECT_EQ(qr.r(i, j), Complex(0.0));
  }
  EXPECT_EQ(qr_rank(qr), 3);
}

TEST(Rank, GenericAndDeficient) {
  std::mt19937_64 rng(7);
  EXPECT_EQ(rank(random_rank(7, 6, 4, rng)), 4);
  EXPECT_EQ(rank(random_matrix(3, 8, rng)), 3);
  EXPECT_EQ(rank(ComplexMatrix(4, 4)), 0);
  EXPECT_EQ(rank(ComplexMatrix(0, 3)), 0);
}

TEST(Rank, ReferenceScaleAndFloor) {
  // A tiny matrix is full rank on its own, noise against a unit reference.
  const ComplexMatrix tiny = ComplexMatrix::from_rows({{1e-17, 0}, {0, 1e-17}});
  EXPECT_EQ(rank(tiny), 2);
  EXPECT_EQ(rank(tiny, {}, 1.0), 0);
  EXPECT_EQ(rank(tiny, ToleranceModel().with_reference_floor(1.0)), 0);
  EXPECT_EQ(rank(ComplexMatrix::identity(2), ToleranceModel().with_reference_floor(1.0)), 2);
}

TEST(ToleranceModel, DefaultsAndValidation) {
  const ToleranceModel t;
  EXPECT_DOUBLE_EQ(t.residual_atol(), 1e-10);
  EXPECT_DOUBLE_EQ(t.reference_floor(), 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  EXPECT_DOUBLE_EQ(t.rank_cutoff(3, 7), 7 * eps);
  EXPECT_DOUBLE_EQ(ToleranceModel(1e-9, 1e-8).rank_cutoff(3, 7), 1e-9);
  EXPECT_THROW(ToleranceModel(-1.0, 1e-8), DomainError);
  EXPECT_THROW(ToleranceModel(1e-20, 1e-8), DomainError);
  EXPECT_THROW(ToleranceModel(0.0, -1.0), DomainError);
  EXPECT_THROW(t.with_reference_floor(-1.0), DomainError);
  EXPECT_THROW(t.with_reference_floor(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(ToleranceModel, CopiesKeepTheFloor) {
  const ToleranceModel t = ToleranceModel(1e-12, 1e-9).with_reference_floor(1.0);
  EXPECT_DOUBLE_EQ(t.with_residual_atol(1e-6).reference_floor(), 1.0);
  EXPECT_DOUBLE_EQ(t.with_rank_rtol(1e-10).reference_floor(), 1.0);
  EXPECT_DOUBLE_EQ(t.with_rank_rtol(1e-10).residual_atol(), 1e-9);
  EXPECT_DOUBLE_EQ(t.with_residual_atol(1e-6).rank_rtol(), 1e-12);
}

TEST(Blocks, ExtractAndAssemble) {
  const ComplexMatrix a = ComplexMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const ComplexMatrix tl = block(a, 0, 0, 1, 1);
  const ComplexMatrix tr = block(a, 0, 1, 1, 2);
  const ComplexMatrix bl = block(a, 1, 0, 2, 1);
  const ComplexMatrix br = block(a, 1, 1, 2, 2);
  EXPECT_EQ(assemble_blocks(tl, tr, bl, br).dense(), a.dense());
  EXPECT_EQ(vstack(hstack(tl, tr), hstack(bl, br)).dense(), a.dense());
  EXPECT_THROW(block(a, 2, 2, 2, 1), ShapeError);
  EXPECT_THROW(hstack(tl, bl), ShapeError);
  EXPECT_THROW(vstack(tl, tr), ShapeError);
  // Zero-width blocks assemble like any other.
  EXPECT_EQ(assemble_blocks(ComplexMatrix(0, 0), ComplexMatrix(0, 3), ComplexMatrix(3, 0), a).dense(), a.dense());
}

TEST(Inverse, NonsingularAndSingular) {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = random_matrix(5, 5, rng);
  EXPECT_MATRIX_NEAR(a * inverse(a), ComplexMatrix::identity(5), 1e-12);
  EXPECT_THROW(inverse(random_rank(4, 4, 3, rng)), DomainError);
  EXPECT_THROW(inverse(ComplexMatrix(2, 3)), ShapeError);
  EXPECT_EQ(inverse(ComplexMatrix(0, 0)).rows(), 0);
}
