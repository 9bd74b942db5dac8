#include <limits>

#include "test_support.hpp"

using namespace geninv;
using geninv::testing::adj;
using geninv::testing::random_matrix;
using geninv::testing::random_rank;
using geninv::testing::random_with_index;

namespace {

void expect_penrose(const ComplexMatrix& a, const ComplexMatrix& x, double tol) {
  EXPECT_MATRIX_NEAR(a * x * a, a, tol);
  EXPECT_MATRIX_NEAR(x * a * x, x, tol);
  EXPECT_MATRIX_NEAR(adj(a * x), a * x, tol);
  EXPECT_MATRIX_NEAR(adj(x * a), x * a, tol);
}

}  // namespace

TEST(Pinv, PenroseEquationsOnRandomShapes) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Index m = 1 + trial % 7;
    const Index n = 1 + (trial * 3) % 6;
    const Index r = std::min(m, n) - (trial % 2 == 0 ? 0 : std::min<Index>(1, std::min(m, n) - 1));
    const ComplexMatrix a = random_rank(m, n, r, rng);
    const ComplexMatrix x = pinv(a);
    ASSERT_EQ(x.rows(), n);
    ASSERT_EQ(x.cols(), m);
    expect_penrose(a, x, 1e-11);
    EXPECT_EQ(rank(x), r);
  }
}

TEST(Pinv, MatchesExactOracle) {
  const RationalMatrix a = RationalMatrix::from_rows({{1, 2, 0}, {2, 4, 0}, {0, 1, -1}, {3, 0, 1}});
  EXPECT_MATRIX_NEAR(pinv(float_of(a)), float_of(exact_pinv(a)), 1e-13);
  const RationalMatrix b = RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  EXPECT_MATRIX_NEAR(pinv(float_of(b)), float_of(exact_pinv(b)), 1e-13);
}

TEST(Pinv, ZeroAndEmpty) {
  const ComplexMatrix z = pinv(ComplexMatrix(3, 2));
  EXPECT_EQ(z.rows(), 2);
  EXPECT_EQ(z.cols(), 3);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(pinv(ComplexMatrix(0, 4)).rows(), 4);
}

TEST(Pinv, ReferenceScaleDropsNoise) {
  const ComplexMatrix a = ComplexMatrix::from_rows({{1, 0}, {0, 1e-17}});
  EXPECT_EQ(rank(pinv(a)), 1);  // own sigma_max 1 already makes 1e-17 noise
  const ComplexMatrix small = ComplexMatrix::from_rows({{1e-17}});
  EXPECT_NEAR(pinv(small)(0, 0).real(), 1e17, 1e3);
  EXPECT_TRUE(pinv(small, {}, 1.0).is_zero());
}

TEST(Projectors, RangeAndCorange) {
  std::mt19937_64 rng(23);
  const ComplexMatrix b = random_rank(6, 4, 2, rng);
  const ComplexMatrix p = proj_range(b);
  const ComplexMatrix q = proj_corange(b);
  EXPECT_MATRIX_NEAR(p * p, p, 1e-13);
  EXPECT_MATRIX_NEAR(adj(p), p, 1e-13);
  EXPECT_MATRIX_NEAR(p * b, b, 1e-13);
  EXPECT_MATRIX_NEAR(b * q, b, 1e-13);
  EXPECT_MATRIX_NEAR(q * q, q, 1e-13);
  EXPECT_MATRIX_NEAR(p, b * pinv(b), 1e-12);
  EXPECT_MATRIX_NEAR(q, pinv(b) * b, 1e-12);
  EXPECT_EQ(rank(p), 2);
  EXPECT_TRUE(proj_range(ComplexMatrix(3, 2)).is_zero());
}

TEST(Power, Basics) {
  const ComplexMatrix j = ComplexMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  EXPECT_EQ(power(j, 0).dense(), ComplexMatrix::identity(3).dense());
  EXPECT_EQ(power(j, 2)(0, 2), Complex(1.0));
  EXPECT_TRUE(power(j, 3).is_zero());
  EXPECT_THROW(power(j, -1), DomainError);
  EXPECT_THROW(power(ComplexMatrix(2, 3), 2), ShapeError);
}

TEST(Power, ReferenceScale) {
  const ToleranceModel plain;
  const ToleranceModel unit = plain.with_reference_floor(1.0);
  EXPECT_DOUBLE_EQ(power_reference(2.0, 0, plain), 1.0);
  EXPECT_DOUBLE_EQ(power_reference(2.0, 3, plain), 8.0);
  EXPECT_DOUBLE_EQ(power_reference(0.5, 3, plain), 0.125);
  // The floor enters once: ||B||^{q-1} max(||B||, floor).
  EXPECT_DOUBLE_EQ(power_reference(0.5, 3, unit), 0.25);
  EXPECT_DOUBLE_EQ(power_reference(2.0, 3, unit), 8.0);
}

TEST(PowerProjector, IdentityAtZeroAndStableRange) {
  std::mt19937_64 rng(29);
  const ComplexMatrix b = random_with_index(2, 2, rng);
  EXPECT_EQ(power_projector(b, 0).dense(), ComplexMatrix::identity(4).dense());
  const ComplexMatrix p2 = power_projector(b, 2);
  EXPECT_EQ(rank(p2), 2);
  EXPECT_MATRIX_NEAR(p2, proj_range(power(b, 2)), 1e-10);
  // Past the index the range no longer changes.
  EXPECT_MATRIX_NEAR(power_projector(b, 5), p2, 1e-10);
  EXPECT_EQ(rank(power_projector(b, 1)), 3);
}

TEST(PowerProjection, LeakageOfDiscardedNoise) {
  const ComplexMatrix clean = ComplexMatrix::from_rows({{2, 0}, {0, 1}});
  EXPECT_DOUBLE_EQ(power_projection(clean, 1).leakage, 0.0);
  const ComplexMatrix noisy = ComplexMatrix::from_rows({{1, 0}, {0, 1e-18}});
  const PowerProjection pp = power_projection(noisy, 1);
  EXPECT_EQ(rank(pp.projector), 1);
  EXPECT_GT(pp.leakage, 0.0);
  EXPECT_LT(pp.leakage, 1e-14);
  const ToleranceModel tol;
  EXPECT_DOUBLE_EQ(projected_reference(3.0, power_projection(clean, 1), tol, 2, 2), 3.0);
  // Leakage of ten cutoffs or more raises the reference proportionally.
  PowerProjection big = pp;
  big.leakage = 100 * tol.rank_cutoff(2, 2);
  EXPECT_DOUBLE_EQ(projected_reference(3.0, big, tol, 2, 2), 3.0 * 1000.0);
}

TEST(MatrixIndex, JordanBlockAndKnownIndex) {
  const ComplexMatrix j = ComplexMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  const IndexReport r = matrix_index(j);
  EXPECT_EQ(r.index, 3);
  EXPECT_EQ(r.rank_sequence, (std::vector<Index>{3, 2, 1, 0, 0}));
  EXPECT_EQ(matrix_index(ComplexMatrix::identity(3)).index, 0);
  EXPECT_EQ(matrix_index(ComplexMatrix(2, 2)).index, 1);
  std::mt19937_64 rng(31);
  for (Index k = 1; k <= 4; ++k) EXPECT_EQ(matrix_index(random_with_index(2, k, rng)).index, k) << "k=" << k;
  EXPECT_THROW(matrix_index(ComplexMatrix(2, 3)), ShapeError);
}

TEST(MatrixIndex, MatchesExactIndex) {
  const RationalMatrix aw = RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}}) *
                            RationalMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_EQ(matrix_index(float_of(aw)).index, exact_index(aw));
}

TEST(RangePredicates, ContainmentAndEquality) {
  std::mt19937_64 rng(37);
  const ComplexMatrix y = random_rank(6, 4, 3, rng);
  const ComplexMatrix c = random_matrix(4, 5, rng);
  EXPECT_TRUE(range_contained(y * c, y));
  EXPECT_FALSE(range_contained(random_matrix(6, 1, rng), y));
  EXPECT_TRUE(range_equal(y, y * random_matrix(4, 4, rng)));
  EXPECT_FALSE(range_equal(y, y * random_rank(4, 4, 2, rng)));
  // Zero has range {0}.
  EXPECT_TRUE(range_contained(ComplexMatrix(6, 2), y));
  EXPECT_THROW(range_contained(ComplexMatrix(5, 1), y), ShapeError);
}

TEST(NullPredicates, ContainmentAndEquality) {
  std::mt19937_64 rng(41);
  const ComplexMatrix y = random_rank(4, 6, 3, rng);
  EXPECT_TRUE(nullspace_contained(y, random_matrix(5, 4, rng) * y));
  EXPECT_FALSE(nullspace_contained(y, random_matrix(1, 6, rng)));
  EXPECT_TRUE(nullspace_equal(y, random_matrix(4, 4, rng) * y));
  EXPECT_FALSE(nullspace_equal(y, random_matrix(4, 6, rng)));
  EXPECT_THROW(nullspace_contained(y, ComplexMatrix(1, 5)), ShapeError);
}

TEST(RangePredicates, ScaleInvariant) {
  std::mt19937_64 rng(43);
  const ComplexMatrix y = random_rank(5, 5, 2, rng);
  const ComplexMatrix x = y * random_matrix(5, 3, rng);
  EXPECT_TRUE(range_contained(scale(x, 1e-6), scale(y, 1e6)));
  EXPECT_TRUE(range_equal(scale(y, 1e8), y));
}
