#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "geninv/matrix.hpp"

namespace geninv {

/// Gaussian rational re + im*i with arbitrary-precision parts in lowest terms.
class RationalScalar {
 public:
  RationalScalar() = default;
  RationalScalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  RationalScalar(mpq_class re, mpq_class im = 0);

  /// Parses "p", "p/q", "-p/q" (no imaginary part).
  static RationalScalar parse_real(const std::string& text);
  /// Exact value of a finite double.
  static mpq_class exact_of_double(double x);

  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  RationalScalar conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  friend RationalScalar operator+(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator-(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator*(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator/(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator-(const RationalScalar& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const RationalScalar& a, const RationalScalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const RationalScalar& a, const RationalScalar& b) { return !(a == b); }

  /// "3/5", "-2i", "1/2+3/4i".
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Dense row-major matrix of Gaussian rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(Index rows, Index cols);
  RationalMatrix(Index rows, Index cols, std::vector<RationalScalar> entries);

  static RationalMatrix from_rows(std::initializer_list<std::initializer_list<RationalScalar>> rows);
  static RationalMatrix identity(Index n);
  /// Exact image of a float matrix (every double is a dyadic rational).
  static RationalMatrix exact_of(const ComplexMatrix& a);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_zero() const;

  const RationalScalar& operator()(Index i, Index j) const { return data_[offset(i, j)]; }
  RationalScalar& operator()(Index i, Index j) { return data_[offset(i, j)]; }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const RationalMatrix& a, const RationalMatrix& b) { return !(a == b); }

 private:
  std::size_t offset(Index i, Index j) const { return static_cast<std::size_t>(i * cols_ + j); }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<RationalScalar> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix conjugate_transpose(const RationalMatrix& a);
RationalMatrix power(const RationalMatrix& a, Index q);

/// Largest dimension the exact routines accept unless told otherwise.
inline constexpr Index kExactSizeGuard = 32;

/// Rank by fraction-free (Bareiss) elimination after clearing denominators.
Index exact_rank(const RationalMatrix& a);

/// Ind(A), exact.
Index exact_index(const RationalMatrix& a);

/// Inverse of a nonsingular square matrix by Gauss-Jordan; DomainError if singular.
RationalMatrix exact_inverse(const RationalMatrix& a);

/// A^+ = G* (G G*)^{-1} (F* F)^{-1} F* from the full-rank factorization A = F G
/// read off the reduced row echelon form.
RationalMatrix exact_pinv(const RationalMatrix& a);

/// P_{B^q} = B^q (B^q)^+, with P_{B^0} = I.
RationalMatrix exact_power_projector(const RationalMatrix& b, Index q);

/// A^k (A^{2k+1})^+ A^k with k = Ind(A).
RationalMatrix exact_drazin(const RationalMatrix& a);

/// (A P_{A^q})^+.
RationalMatrix exact_qbt(const RationalMatrix& a, Index q);

/// (WAW P_{(AW)^q})^+. W must be nonzero.
RationalMatrix exact_weighted_qbt(const RationalMatrix& a, const RationalMatrix& w, Index q);

/// A [(WA)^d]^2.
RationalMatrix exact_weighted_drazin(const RationalMatrix& a, const RationalMatrix& w);

/// Nearest-double conversion per entry; NumericError on overflow.
ComplexMatrix float_of(const RationalMatrix& a);

/// Nearest double to an exact rational.
double nearest_double(const mpq_class& x);

}  // namespace geninv
