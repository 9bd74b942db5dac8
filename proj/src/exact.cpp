#include "geninv/exact.hpp"

#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <utility>

namespace geninv {

namespace {

void guard(const RationalMatrix& a, const char* op) {
  if (a.rows() > kExactSizeGuard || a.cols() > kExactSizeGuard) {
    throw DomainError(std::string(op) + ": exact path limited to " + std::to_string(kExactSizeGuard) + "x" +
                      std::to_string(kExactSizeGuard) + " matrices");
  }
}

std::string shape_of(const RationalMatrix& a) { return std::to_string(a.rows()) + "x" + std::to_string(a.cols()); }

// Reduced row echelon form and the pivot columns, by Gauss-Jordan over Q(i).
std::pair<RationalMatrix, std::vector<Index>> rref(RationalMatrix a) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index pivot = row;
    while (pivot < a.rows() && a(pivot, col).is_zero()) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row)
      for (Index j = 0; j < a.cols(); ++j) std::swap(a(pivot, j), a(row, j));
    const RationalScalar lead = a(row, col);
    for (Index j = col; j < a.cols(); ++j) a(row, j) = a(row, j) / lead;
    for (Index i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      const RationalScalar factor = a(i, col);
      for (Index j = col; j < a.cols(); ++j) a(i, j) = a(i, j) - factor * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

mpz_class lcm_of_denominators(const RationalMatrix& a, Index row) {
  mpz_class l = 1;
  for (Index j = 0; j < a.cols(); ++j) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(row, j).re().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(row, j).im().get_den_mpz_t());
  }
  return l;
}

}  // namespace

RationalScalar::RationalScalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

RationalScalar RationalScalar::parse_real(const std::string& text) {
  mpq_class value;
  std::string body = text;
  if (!body.empty() && body.front() == '+') body.erase(0, 1);
  if (body.empty() || value.set_str(body, 10) != 0) throw DomainError("not a rational number: '" + text + "'");
  if (sgn(value.get_den()) == 0) throw DomainError("zero denominator in '" + text + "'");
  value.canonicalize();
  return {value, 0};
}

mpq_class RationalScalar::exact_of_double(double x) {
  if (!std::isfinite(x)) throw NumericError("cannot represent a non-finite double exactly");
  return mpq_class(x);
}

RationalScalar operator+(const RationalScalar& a, const RationalScalar& b) {
  return {a.re_ + b.re_, a.im_ + b.im_};
}

RationalScalar operator-(const RationalScalar& a, const RationalScalar& b) {
  return {a.re_ - b.re_, a.im_ - b.im_};
}

RationalScalar operator*(const RationalScalar& a, const RationalScalar& b) {
  return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

RationalScalar operator/(const RationalScalar& a, const RationalScalar& b) {
  const mpq_class d = b.norm();
  if (sgn(d) == 0) throw DomainError("division by zero");
  return {(a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d};
}

std::string RationalScalar::to_string() const {
  if (is_real()) return re_.get_str();
  const mpq_class abs_im = abs(im_);
  const std::string im_part = (abs_im == 1 ? std::string() : abs_im.get_str()) + "i";
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + im_part;
  return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + im_part;
}

RationalMatrix::RationalMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
}

RationalMatrix::RationalMatrix(Index rows, Index cols, std::vector<RationalScalar> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  if (static_cast<Index>(data_.size()) != rows * cols) {
    throw ShapeError("expected " + std::to_string(rows * cols) + " entries, got " + std::to_string(data_.size()));
  }
}

RationalMatrix RationalMatrix::from_rows(std::initializer_list<std::initializer_list<RationalScalar>> rows) {
  const auto n_rows = static_cast<Index>(rows.size());
  const auto n_cols = n_rows == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
  std::vector<RationalScalar> entries;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n_cols) throw ShapeError("ragged row in matrix literal");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return {n_rows, n_cols, std::move(entries)};
}

RationalMatrix RationalMatrix::identity(Index n) {
  RationalMatrix out(n, n);
  for (Index i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

RationalMatrix RationalMatrix::exact_of(const ComplexMatrix& a) {
  RationalMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out(i, j) = RationalScalar(RationalScalar::exact_of_double(a(i, j).real()),
                                 RationalScalar::exact_of_double(a(i, j).imag()));
  return out;
}

bool RationalMatrix::is_zero() const {
  for (const auto& z : data_)
    if (!z.is_zero()) return false;
  return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("multiply: " + shape_of(a) + " times " + shape_of(b));
  RationalMatrix out(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index l = 0; l < a.cols(); ++l) {
      if (a(i, l).is_zero()) continue;
      for (Index j = 0; j < b.cols(); ++j)
        if (!b(l, j).is_zero()) out(i, j) = out(i, j) + a(i, l) * b(l, j);
    }
  return out;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: " + shape_of(a) + " vs " + shape_of(b));
  RationalMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("subtract: " + shape_of(a) + " vs " + shape_of(b));
  }
  RationalMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

RationalMatrix conjugate_transpose(const RationalMatrix& a) {
  RationalMatrix out(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(j, i) = a(i, j).conj();
  return out;
}

RationalMatrix power(const RationalMatrix& a, Index q) {
  if (!a.is_square()) throw ShapeError("power of non-square " + shape_of(a));
  if (q < 0) throw DomainError("power: negative exponent");
  RationalMatrix out = RationalMatrix::identity(a.rows());
  for (Index j = 0; j < q; ++j) out = out * a;
  return out;
}

Index exact_rank(const RationalMatrix& input) {
  guard(input, "exact_rank");
  // Scale each row to Gaussian integers, then Bareiss: every update is
  // (pivot * a_ij - a_ic * a_rj) / previous pivot, which divides exactly.
  RationalMatrix a = input;
  for (Index i = 0; i < a.rows(); ++i) {
    const RationalScalar l(mpq_class(lcm_of_denominators(a, i)));
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = a(i, j) * l;
  }
  RationalScalar previous(1);
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index pivot = row;
    while (pivot < a.rows() && a(pivot, col).is_zero()) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row)
      for (Index j = 0; j < a.cols(); ++j) std::swap(a(pivot, j), a(row, j));
    const RationalScalar lead = a(row, col);
    for (Index i = row + 1; i < a.rows(); ++i) {
      for (Index j = col + 1; j < a.cols(); ++j) a(i, j) = (lead * a(i, j) - a(i, col) * a(row, j)) / previous;
      a(i, col) = RationalScalar();
    }
    previous = lead;
    ++row;
  }
  return row;
}

Index exact_index(const RationalMatrix& a) {
  guard(a, "exact_index");
  if (!a.is_square()) throw ShapeError("exact_index: expected a square matrix, got " + shape_of(a));
  Index previous = a.rows();
  RationalMatrix current = RationalMatrix::identity(a.rows());
  for (Index j = 1; j <= a.rows() + 1; ++j) {
    current = current * a;
    const Index r = exact_rank(current);
    if (r == previous) return j - 1;
    previous = r;
  }
  return a.rows();
}

RationalMatrix exact_inverse(const RationalMatrix& a) {
  guard(a, "exact_inverse");
  if (!a.is_square()) throw ShapeError("exact_inverse: expected a square matrix, got " + shape_of(a));
  const Index n = a.rows();
  RationalMatrix augmented(n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) augmented(i, j) = a(i, j);
    augmented(i, n + i) = 1;
  }
  const auto [reduced, pivots] = rref(std::move(augmented));
  if (static_cast<Index>(pivots.size()) < n || (n > 0 && pivots.back() >= n)) {
    throw DomainError("exact_inverse: matrix is singular");
  }
  RationalMatrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = reduced(i, n + j);
  return out;
}

RationalMatrix exact_pinv(const RationalMatrix& a) {
  guard(a, "exact_pinv");
  const auto [reduced, pivots] = rref(a);
  const auto r = static_cast<Index>(pivots.size());
  if (r == 0) return RationalMatrix(a.cols(), a.rows());

  RationalMatrix f(a.rows(), r);  // pivot columns of A
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < r; ++j) f(i, j) = a(i, pivots[static_cast<std::size_t>(j)]);
  RationalMatrix g(r, a.cols());  // nonzero rows of the RREF
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < a.cols(); ++j) g(i, j) = reduced(i, j);

  const RationalMatrix fh = conjugate_transpose(f);
  const RationalMatrix gh = conjugate_transpose(g);
  return gh * exact_inverse(g * gh) * exact_inverse(fh * f) * fh;
}

RationalMatrix exact_power_projector(const RationalMatrix& b, Index q) {
  if (!b.is_square()) throw ShapeError("exact_power_projector: expected a square matrix, got " + shape_of(b));
  if (q == 0) return RationalMatrix::identity(b.rows());
  const RationalMatrix bq = power(b, q);
  return bq * exact_pinv(bq);
}

RationalMatrix exact_drazin(const RationalMatrix& a) {
  const Index k = exact_index(a);
  const RationalMatrix ak = power(a, k);
  return ak * exact_pinv(power(a, 2 * k + 1)) * ak;
}

RationalMatrix exact_qbt(const RationalMatrix& a, Index q) {
  guard(a, "exact_qbt");
  if (!a.is_square()) throw ShapeError("exact_qbt: expected a square matrix, got " + shape_of(a));
  if (q < 0) throw DomainError("q must be nonnegative");
  return exact_pinv(a * exact_power_projector(a, q));
}

RationalMatrix exact_weighted_qbt(const RationalMatrix& a, const RationalMatrix& w, Index q) {
  guard(a, "exact_weighted_qbt");
  if (a.rows() != w.cols() || a.cols() != w.rows()) {
    throw ShapeError("exact_weighted_qbt: A is " + shape_of(a) + " but W is " + shape_of(w));
  }
  if (w.is_zero()) throw DomainError("exact_weighted_qbt: W must be nonzero");
  if (q < 0) throw DomainError("q must be nonnegative");
  const RationalMatrix aw = a * w;
  return exact_pinv(w * aw * exact_power_projector(aw, q));
}

RationalMatrix exact_weighted_drazin(const RationalMatrix& a, const RationalMatrix& w) {
  if (a.rows() != w.cols() || a.cols() != w.rows()) {
    throw ShapeError("exact_weighted_drazin: A is " + shape_of(a) + " but W is " + shape_of(w));
  }
  if (w.is_zero()) throw DomainError("exact_weighted_drazin: W must be nonzero");
  const RationalMatrix d = exact_drazin(w * a);
  return a * d * d;
}

double nearest_double(const mpq_class& x) {
  if (sgn(x) == 0) return 0.0;
  const mpq_class magnitude = abs(x);
  if (magnitude > mpq_class(DBL_MAX)) throw NumericError("rational " + x.get_str() + " overflows a double");
  // mpq_get_d truncates toward zero; step up one ulp when that is closer.
  double lower = magnitude.get_d();
  const double upper = std::nextafter(lower, INFINITY);
  double result = lower;
  if (std::isfinite(upper)) {
    const mpq_class below = magnitude - mpq_class(lower);
    const mpq_class above = mpq_class(upper) - magnitude;
    if (above < below || (above == below && (std::bit_cast<std::uint64_t>(lower) & 1u) != 0)) result = upper;
  }
  return sgn(x) < 0 ? -result : result;
}

ComplexMatrix float_of(const RationalMatrix& a) {
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(a.rows() * a.cols()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) entries.emplace_back(nearest_double(a(i, j).re()), nearest_double(a(i, j).im()));
  return ComplexMatrix(a.rows(), a.cols(), std::move(entries));
}

}  // namespace geninv
