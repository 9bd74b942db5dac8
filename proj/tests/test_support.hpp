#pragma once

#include <random>

#include <gtest/gtest.h>

#include "geninv/exact.hpp"
#include "geninv/matrix.hpp"
#include "geninv/projectors.hpp"

namespace geninv::testing {

inline ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, bool complex = true) {
  std::normal_distribution<double> g;
  std::vector<Complex> e(static_cast<std::size_t>(rows * cols));
  for (Complex& z : e) z = complex ? Complex(g(rng), g(rng)) : Complex(g(rng), 0.0);
  return ComplexMatrix(rows, cols, std::move(e));
}

// rows x cols of rank r (generic).
inline ComplexMatrix random_rank(Index rows, Index cols, Index r, std::mt19937_64& rng) {
  return random_matrix(rows, r, rng) * random_matrix(r, cols, rng);
}

// S [[T, 0], [0, N]] S^{-1} with T nonsingular t x t and N a single Jordan
// block of size `index` (so Ind = index), n = t + index.
inline ComplexMatrix random_with_index(Index t, Index index, std::mt19937_64& rng) {
  const Index n = t + index;
  DenseMatrix core = DenseMatrix::Zero(n, n);
  core.topLeftCorner(t, t) = random_matrix(t, t, rng).dense() + 3.0 * DenseMatrix::Identity(t, t);
  for (Index i = 0; i + 1 < index; ++i) core(t + i, t + i + 1) = 1.0;
  const DenseMatrix s = random_matrix(n, n, rng).dense() + 4.0 * DenseMatrix::Identity(n, n);
  return ComplexMatrix(DenseMatrix(s * core * s.inverse()));
}

inline double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return relative_distance(a, b); }

inline ComplexMatrix adj(const ComplexMatrix& a) { return conjugate_transpose(a); }

}  // namespace geninv::testing

#define EXPECT_MATRIX_NEAR(a, b, tol) EXPECT_LE(::geninv::relative_distance((a), (b)), (tol))
