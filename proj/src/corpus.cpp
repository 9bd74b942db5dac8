#include "geninv/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace geninv {

namespace {

constexpr int kMaxDraws = 1000;

struct Grading {
  std::vector<Index> x_dims;  // levels on the m side, level l at position l-1
  std::vector<Index> y_dims;  // levels on the n side

  static Index offset(const std::vector<Index>& dims, Index level) {
    return std::accumulate(dims.begin(), dims.begin() + (level - 1), Index{0});
  }
  Index x_size() const { return std::accumulate(x_dims.begin(), x_dims.end(), Index{0}); }
  Index y_size() const { return std::accumulate(y_dims.begin(), y_dims.end(), Index{0}); }
};

class EntrySource {
 public:
  EntrySource(std::mt19937_64& rng, bool integer) : rng_(rng), integer_(integer) {}

  // Integers in [-2, 2], or complex quarters in [-1, 1] + i[-1, 1] (exact dyadics).
  RationalScalar draw() {
    if (integer_) return RationalScalar(std::uniform_int_distribution<long>(-2, 2)(rng_));
    std::uniform_int_distribution<long> quarter(-4, 4);
    return {mpq_class(quarter(rng_), 4), mpq_class(quarter(rng_), 4)};
  }

  void fill(RationalMatrix& m, Index row, Index col, Index rows, Index cols) {
    for (Index i = row; i < row + rows; ++i)
      for (Index j = col; j < col + cols; ++j) m(i, j) = draw();
  }

  RationalMatrix dense(Index rows, Index cols) {
    RationalMatrix m(rows, cols);
    fill(m, 0, 0, rows, cols);
    return m;
  }

  // Row-diagonally dominant by a margin of at least 1, so the leading blocks
  // stay far from singular and the planted pairs well conditioned.
  RationalMatrix dominant_square(Index n) {
    RationalMatrix m = dense(n, n);
    for (Index i = 0; i < n; ++i) {
      mpq_class off = 0;
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        off += abs(m(i, j).re()) + abs(m(i, j).im());
      }
      m(i, i) = RationalScalar(mpq_class(off + 1));
    }
    return m;
  }

 private:
  std::mt19937_64& rng_;
  bool integer_;
};

// Level dimensions: each level gets one slot, then random levels grow to two
// while the larger side stays within budget.
Grading draw_grading(Index x_levels, Index y_levels, Index budget, std::mt19937_64& rng) {
  Grading g{std::vector<Index>(static_cast<std::size_t>(x_levels), 1),
            std::vector<Index>(static_cast<std::size_t>(y_levels), 1)};
  std::bernoulli_distribution grow(0.4);
  for (auto& d : g.x_dims)
    if (g.x_size() < budget && grow(rng)) d = 2;
  for (auto& d : g.y_dims)
    if (g.y_size() < budget && grow(rng)) d = 2;
  return g;
}

// Writes a generic map from `src` level of one side into `dst` level of the other.
void fill_level_map(RationalMatrix& block, const std::vector<Index>& row_dims, Index row_level,
                    const std::vector<Index>& col_dims, Index col_level, EntrySource& entries) {
  entries.fill(block, Grading::offset(row_dims, row_level), Grading::offset(col_dims, col_level),
               row_dims[static_cast<std::size_t>(row_level - 1)], col_dims[static_cast<std::size_t>(col_level - 1)]);
}

RationalMatrix place_blocks(const RationalMatrix& b1, const RationalMatrix& b2, const RationalMatrix& b3) {
  const Index t = b1.rows();
  RationalMatrix out(t + b3.rows(), t + b3.cols());
  for (Index i = 0; i < t; ++i) {
    for (Index j = 0; j < t; ++j) out(i, j) = b1(i, j);
    for (Index j = 0; j < b2.cols(); ++j) out(i, t + j) = b2(i, j);
  }
  for (Index i = 0; i < b3.rows(); ++i)
    for (Index j = 0; j < b3.cols(); ++j) out(t + i, t + j) = b3(i, j);
  return out;
}

// Product of a sparse unit-lower and a sparse unit-upper matrix with entries in
// {-1, 0, 1}; about one off-diagonal entry per row keeps the condition number small.
RationalMatrix random_unimodular(Index n, std::mt19937_64& rng) {
  std::bernoulli_distribution present(n > 1 ? 1.0 / static_cast<double>(n) : 0.0);
  std::bernoulli_distribution negative(0.5);
  RationalMatrix lower = RationalMatrix::identity(n);
  RationalMatrix upper = RationalMatrix::identity(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j || !present(rng)) continue;
      (i > j ? lower : upper)(i, j) = negative(rng) ? -1 : 1;
    }
  return lower * upper;
}

ComplexMatrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return ComplexMatrix(std::move(m));
}

}  // namespace

ComplexMatrix random_unitary(Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr{Eigen::MatrixXcd(g.dense())};
  return ComplexMatrix(DenseMatrix(Eigen::MatrixXcd(qr.householderQ())));
}

PlantedPair generate_planted_pair(const PlantedPairSpec& spec, std::mt19937_64& rng) {
  if (spec.k < 1) throw DomainError("planted pair: k must be at least 1");
  const bool needs_lead = spec.pattern != IndexPattern::kEqual;
  if (spec.t < 0 || (needs_lead && spec.t == 0)) throw DomainError("planted pair: pattern needs t >= 1");

  Index x_levels = spec.k;
  Index y_levels = spec.k;
  Index expect_aw = spec.k;
  Index expect_wa = spec.k;
  if (spec.pattern == IndexPattern::kAwLonger) {
    y_levels = spec.k - 1;
    expect_wa = spec.k - 1;
  } else if (spec.pattern == IndexPattern::kWaLonger) {
    x_levels = spec.k - 1;
    expect_aw = spec.k - 1;
  }
  if (spec.t + std::max(x_levels, y_levels) > spec.max_dim) {
    throw DomainError("planted pair: t + k exceeds max_dim " + std::to_string(spec.max_dim));
  }

  EntrySource entries(rng, spec.integer);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    const Grading g = draw_grading(x_levels, y_levels, spec.max_dim - spec.t, rng);
    const Index s = g.x_size();  // m - t
    const Index r = g.y_size();  // n - t
    const Index t = spec.t;

    RationalMatrix a3(s, r);
    RationalMatrix w3(r, s);
    switch (spec.pattern) {
      case IndexPattern::kEqual:
      case IndexPattern::kWaLonger:
        // W3: X_l -> Y_l, A3: Y_l -> X_{l-1}
        for (Index l = 1; l <= x_levels; ++l) fill_level_map(w3, g.y_dims, l, g.x_dims, l, entries);
        for (Index l = 2; l <= y_levels; ++l) fill_level_map(a3, g.x_dims, l - 1, g.y_dims, l, entries);
        break;
      case IndexPattern::kAwLonger:
        // A3: Y_l -> X_l, W3: X_l -> Y_{l-1}
        for (Index l = 1; l <= y_levels; ++l) fill_level_map(a3, g.x_dims, l, g.y_dims, l, entries);
        for (Index l = 2; l <= x_levels; ++l) fill_level_map(w3, g.y_dims, l - 1, g.x_dims, l, entries);
        break;
    }
    const RationalMatrix a1 = entries.dominant_square(t);
    const RationalMatrix w1 = entries.dominant_square(t);
    if (exact_rank(a1) < t || exact_rank(w1) < t) continue;
    const RationalMatrix a_blk = place_blocks(a1, entries.dense(t, r), a3);
    const RationalMatrix w_blk = place_blocks(w1, entries.dense(t, s), w3);
    if (w_blk.is_zero()) continue;

    const RationalMatrix aw = a_blk * w_blk;
    const RationalMatrix wa = w_blk * a_blk;
    if (exact_index(aw) != expect_aw || exact_index(wa) != expect_wa) continue;
    if (exact_rank(power(aw, spec.k)) != t) continue;

    PlantedPair out;
    out.t = t;
    out.ind_aw = expect_aw;
    out.ind_wa = expect_wa;
    out.k = spec.k;
    if (spec.integer) {
      const RationalMatrix p = random_unimodular(t + s, rng);
      const RationalMatrix q = random_unimodular(t + r, rng);
      const RationalMatrix a = p * a_blk * exact_inverse(q);
      const RationalMatrix w = q * w_blk * exact_inverse(p);
      out.a = float_of(a);
      out.w = float_of(w);
      out.exact_a = a;
      out.exact_w = w;
    } else {
      const ComplexMatrix u = random_unitary(t + s, rng);
      const ComplexMatrix v = random_unitary(t + r, rng);
      out.a = u * float_of(a_blk) * conjugate_transpose(v);
      out.w = v * float_of(w_blk) * conjugate_transpose(u);
    }
    return out;
  }
  throw NumericError("planted pair: no draw matched the planted indices");
}

std::vector<PlantedPair> generate_corpus(std::uint64_t seed, Index count, Index max_dim) {
  if (count < 1) throw DomainError("corpus: count must be at least 1");
  if (max_dim < 2) throw DomainError("corpus: max_dim must be at least 2");
  std::mt19937_64 rng(seed);
  std::vector<PlantedPair> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  constexpr IndexPattern kPatterns[] = {IndexPattern::kEqual, IndexPattern::kAwLonger, IndexPattern::kWaLonger};
  for (Index i = 0; i < count; ++i) {
    PlantedPairSpec spec;
    spec.max_dim = max_dim;
    spec.integer = i % 2 == 1;
    spec.pattern = kPatterns[(i / 3) % 3];
    const Index min_t = spec.pattern == IndexPattern::kEqual ? 0 : 1;
    spec.k = std::min<Index>(1 + i % 3, max_dim - min_t);
    // t = 0 only now and then; it makes (AW)^k vanish.
    const Index max_t = std::min<Index>(3, max_dim - spec.k);
    std::uniform_int_distribution<Index> pick_t(min_t == 0 && i % 7 == 0 ? 0 : 1, std::max<Index>(1, max_t));
    spec.t = std::min(pick_t(rng), max_t);
    corpus.push_back(generate_planted_pair(spec, rng));
  }
  return corpus;
}

BlockTriangularSample random_block_triangular(Index m, Index n, Index t, std::mt19937_64& rng) {
  if (t < 0 || t > std::min(m, n)) throw DomainError("block triangular sample: need 0 <= t <= min(m, n)");
  BlockTriangularSample s;
  s.u = random_unitary(m, rng);
  s.v = random_unitary(n, rng);
  s.a1 = gaussian(t, t, rng) + scale(ComplexMatrix::identity(t), 3.0);
  s.a2 = gaussian(t, n - t, rng);
  // A3 of random (possibly deficient) rank so that Q_A3 is a proper projector.
  const Index inner_max = std::min(m - t, n - t);
  const Index inner = inner_max == 0 ? 0 : std::uniform_int_distribution<Index>(0, inner_max)(rng);
  s.a3 = gaussian(m - t, inner, rng) * gaussian(inner, n - t, rng);
  s.matrix = s.u * assemble_blocks(s.a1, s.a2, ComplexMatrix(m - t, t), s.a3) * conjugate_transpose(s.v);
  return s;
}

}  // namespace geninv
