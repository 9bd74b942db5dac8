#include <cfloat>
#include <random>

#include <gtest/gtest.h>

#include "geninv/exact.hpp"

using namespace geninv;

namespace {

RationalScalar q(long p, long d) { return RationalScalar(mpq_class(p, d)); }

RationalMatrix random_integer(Index rows, Index cols, std::mt19937_64& rng, bool complex = false) {
  std::uniform_int_distribution<long> pick(-3, 3);
  RationalMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = RationalScalar(pick(rng), complex ? pick(rng) : 0);
  return m;
}

void expect_penrose(const RationalMatrix& a, const RationalMatrix& x) {
  EXPECT_EQ(a * x * a, a);
  EXPECT_EQ(x * a * x, x);
  EXPECT_EQ(conjugate_transpose(a * x), a * x);
  EXPECT_EQ(conjugate_transpose(x * a), x * a);
}

}  // namespace

TEST(RationalScalar, Arithmetic) {
  const RationalScalar a(mpq_class(1, 2), mpq_class(1, 3));
  const RationalScalar b(mpq_class(-2, 5), 1);
  EXPECT_EQ(a + b, RationalScalar(mpq_class(1, 10), mpq_class(4, 3)));
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a - a, RationalScalar(0));
  EXPECT_EQ(a.conj(), RationalScalar(mpq_class(1, 2), mpq_class(-1, 3)));
  EXPECT_EQ(a.norm(), mpq_class(13, 36));
  EXPECT_THROW(a / RationalScalar(0), DomainError);
  // i^2 = -1
  EXPECT_EQ(RationalScalar(0, 1) * RationalScalar(0, 1), RationalScalar(-1));
}

TEST(RationalScalar, ParsingAndPrinting) {
  EXPECT_EQ(RationalScalar::parse_real("3/6"), q(1, 2));
  EXPECT_EQ(RationalScalar::parse_real("-4"), RationalScalar(-4));
  EXPECT_THROW(RationalScalar::parse_real("1/0"), DomainError);
  EXPECT_THROW(RationalScalar::parse_real("x"), DomainError);
  EXPECT_EQ(q(3, 5).to_string(), "3/5");
  EXPECT_EQ(RationalScalar(0, -2).to_string(), "-2i");
  EXPECT_EQ(RationalScalar(mpq_class(1, 2), mpq_class(3, 4)).to_string(), "1/2+3/4i");
  EXPECT_EQ(RationalScalar(0).to_string(), "0");
}

TEST(RationalScalar, ExactDoubles) {
  EXPECT_EQ(RationalScalar::exact_of_double(0.5), mpq_class(1, 2));
  // 0.1 is not 1/10 in binary.
  EXPECT_NE(RationalScalar::exact_of_double(0.1), mpq_class(1, 10));
  EXPECT_EQ(nearest_double(RationalScalar::exact_of_double(0.1)), 0.1);
  EXPECT_EQ(nearest_double(mpq_class(1, 3)), 1.0 / 3.0);
}

TEST(RationalMatrix, ProductsAndShapes) {
  const RationalMatrix a = RationalMatrix::from_rows({{1, 2}, {3, 4}});
  const RationalMatrix b = RationalMatrix::from_rows({{0, 1}, {1, 0}});
  EXPECT_EQ(a * b, RationalMatrix::from_rows({{2, 1}, {4, 3}}));
  EXPECT_EQ(power(a, 0), RationalMatrix::identity(2));
  EXPECT_EQ(power(b, 2), RationalMatrix::identity(2));
  EXPECT_THROW(a * RationalMatrix(3, 1), ShapeError);
  EXPECT_THROW(a + RationalMatrix(2, 1), ShapeError);
  EXPECT_THROW(power(RationalMatrix(2, 3), 2), ShapeError);
  EXPECT_TRUE(RationalMatrix(2, 2).is_zero());
}

TEST(ExactRank, KnownRanks) {
  EXPECT_EQ(exact_rank(RationalMatrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}})), 2);
  EXPECT_EQ(exact_rank(RationalMatrix(3, 4)), 0);
  EXPECT_EQ(exact_rank(RationalMatrix::identity(5)), 5);
  EXPECT_EQ(exact_rank(RationalMatrix::from_rows({{q(1, 2), q(1, 3)}, {q(3, 2), 1}})), 1);
  EXPECT_EQ(exact_rank(RationalMatrix::from_rows({{RationalScalar(0, 1), 1}, {-1, RationalScalar(0, 1)}})), 1);
}

TEST(ExactIndex, JordanAndExampleProducts) {
  EXPECT_EQ(exact_index(RationalMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}})), 3);
  EXPECT_EQ(exact_index(RationalMatrix::identity(3)), 0);
  const RationalMatrix a = RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  const RationalMatrix w = RationalMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_EQ(exact_index(a * w), 3);
  EXPECT_EQ(exact_index(w * a), 2);
}

TEST(ExactInverse, InverseAndSingular) {
  std::mt19937_64 rng(101);
  const RationalMatrix a = RationalMatrix::from_rows({{2, 1}, {7, 4}});
  EXPECT_EQ(exact_inverse(a), RationalMatrix::from_rows({{4, -1}, {-7, 2}}));
  EXPECT_THROW(exact_inverse(RationalMatrix::from_rows({{1, 2}, {2, 4}})), DomainError);
  for (int t = 0; t < 5; ++t) {
    const RationalMatrix m = random_integer(4, 4, rng, true);
    if (exact_rank(m) < 4) continue;
    EXPECT_EQ(m * exact_inverse(m), RationalMatrix::identity(4));
  }
}

TEST(ExactPinv, PenroseEquationsHoldExactly) {
  std::mt19937_64 rng(103);
  for (int t = 0; t < 12; ++t) {
    const Index m = 1 + t % 5;
    const Index n = 1 + (t * 2) % 5;
    RationalMatrix a = random_integer(m, n, rng, t % 2 == 0);
    if (m > 1) {  // force a dependent row
      for (Index j = 0; j < n; ++j) a(m - 1, j) = a(0, j) + a(0, j);
    }
    expect_penrose(a, exact_pinv(a));
  }
  EXPECT_EQ(exact_pinv(RationalMatrix(2, 3)), RationalMatrix(3, 2));
}

TEST(ExactDrazin, DefiningEquations) {
  const RationalMatrix a = RationalMatrix::from_rows({{2, 1, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  const Index k = exact_index(a);
  ASSERT_EQ(k, 2);
  const RationalMatrix x = exact_drazin(a);
  EXPECT_EQ(x * power(a, k + 1), power(a, k));
  EXPECT_EQ(x * a * x, x);
  EXPECT_EQ(a * x, x * a);
}

TEST(ExactQBT, Reductions) {
  const RationalMatrix a = RationalMatrix::from_rows({{2, 1, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  EXPECT_EQ(exact_qbt(a, 0), exact_pinv(a));
  EXPECT_EQ(exact_qbt(a, 1), exact_pinv(a * a * exact_pinv(a)));
  EXPECT_EQ(exact_qbt(a, 2), exact_qbt(a, 5));
  EXPECT_EQ(exact_power_projector(a, 0), RationalMatrix::identity(4));
  const RationalMatrix p = exact_power_projector(a, 2);
  EXPECT_EQ(p * p, p);
  EXPECT_EQ(conjugate_transpose(p), p);
  EXPECT_THROW(exact_qbt(a, -1), DomainError);
}

TEST(ExactWeighted, ExampleValues) {
  const RationalMatrix a = RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  const RationalMatrix w = RationalMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_EQ(exact_weighted_qbt(a, w, 2),
            RationalMatrix::from_rows({{q(1, 2), 0, 0}, {q(1, 2), 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(exact_weighted_qbt(a, w, 1),
            RationalMatrix::from_rows({{q(1, 6), 0, 0}, {q(1, 6), 0, 0}, {q(1, 3), 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(exact_weighted_qbt(a, w, 0), exact_pinv(w * a * w));
  // W-weighted Drazin: X WAW X = X, AW X = X WA.
  const RationalMatrix d = exact_weighted_drazin(a, w);
  EXPECT_EQ(d * w * a * w * d, d);
  EXPECT_EQ(a * w * d, d * w * a);
  EXPECT_THROW(exact_weighted_qbt(a, RationalMatrix(3, 4), 1), DomainError);
  EXPECT_THROW(exact_weighted_qbt(a, RationalMatrix(4, 3), 1), ShapeError);
  EXPECT_THROW(exact_weighted_drazin(a, RationalMatrix(3, 4)), DomainError);
}

TEST(ExactPath, SizeGuard) {
  const RationalMatrix big = RationalMatrix::identity(kExactSizeGuard + 1);
  EXPECT_THROW(exact_pinv(big), DomainError);
  EXPECT_NO_THROW(exact_rank(RationalMatrix::identity(kExactSizeGuard)));
}

TEST(FloatConversion, RoundTrip) {
  const ComplexMatrix f = ComplexMatrix::from_rows({{0.1, Complex(-2.5, 1e-300)}, {1e300, 3}});
  EXPECT_EQ(float_of(RationalMatrix::exact_of(f)).dense(), f.dense());
  RationalMatrix huge(1, 1);
  huge(0, 0) = RationalScalar(mpq_class(DBL_MAX) * 2);
  EXPECT_THROW(float_of(huge), NumericError);
}
