#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "geninv/exact.hpp"
#include "geninv/matrix.hpp"

namespace geninv {

/// How the trailing nilpotent blocks are graded; controls Ind(AW) - Ind(WA).
enum class IndexPattern { kEqual, kAwLonger, kWaLonger };

/// Pair (A, W) with planted weighted core-EP structure and known indices.
struct PlantedPair {
  ComplexMatrix a;
  ComplexMatrix w;
  Index t = 0;  // rank((AW)^k)
  Index ind_aw = 0;
  Index ind_wa = 0;
  Index k = 0;
  /// Present when A and W have integer entries (unimodular framing); the exact
  /// images are then available for oracle comparisons.
  std::optional<RationalMatrix> exact_a;
  std::optional<RationalMatrix> exact_w;
};

struct PlantedPairSpec {
  Index k = 1;          // planted max(Ind(AW), Ind(WA)), >= 1
  IndexPattern pattern = IndexPattern::kEqual;
  Index t = 1;          // size of the nonsingular leading blocks
  Index max_dim = 8;    // bound on m and n
  bool integer = false; // integer entries with unimodular framing instead of unitary
};

/// Draws one planted pair. Deterministic given the generator state.
///
/// The trailing blocks are graded: with levels X_1..X_k (m side) and
/// Y_1..Y_k (n side), W3 maps X_l to Y_l and A3 maps Y_l to X_{l-1}
/// (kEqual), which makes A3 W3 and W3 A3 nilpotent of index exactly k for
/// generic entries. The other patterns shift one grading to plant
/// |Ind(AW) - Ind(WA)| = 1. Indices are confirmed exactly on the block form
/// and the draw is repeated until they match the plan.
PlantedPair generate_planted_pair(const PlantedPairSpec& spec, std::mt19937_64& rng);

/// Deterministic-by-seed corpus: planted k cycles through {1, 2, 3}, every
/// other pair has integer entries, and index patterns rotate.
std::vector<PlantedPair> generate_corpus(std::uint64_t seed, Index count, Index max_dim);

/// n x n random unitary from the QR factor of a complex Gaussian matrix.
ComplexMatrix random_unitary(Index n, std::mt19937_64& rng);

/// Random m x n block upper-triangular matrix U [[A1, A2], [0, A3]] V* with
/// nonsingular A1 (t x t). Returns the matrix and its blocks.
struct BlockTriangularSample {
  ComplexMatrix u, v, a1, a2, a3, matrix;
};
BlockTriangularSample random_block_triangular(Index m, Index n, Index t, std::mt19937_64& rng);

}  // namespace geninv
