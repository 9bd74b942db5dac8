#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "geninv/errors.hpp"

namespace geninv {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Row-major dense storage shared by every float-path routine.
using DenseMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Immutable dense complex matrix with an explicit shape.
///
/// Entries are finite on construction. Shapes may be 0 in either dimension so
/// that empty blocks of a partitioned matrix are ordinary values.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// Zero matrix of the given shape.
  ComplexMatrix(Index rows, Index cols);

  /// `entries` in row-major order; its length must be rows * cols.
  ComplexMatrix(Index rows, Index cols, std::vector<Complex> entries);

  explicit ComplexMatrix(DenseMatrix data);

  /// Row-by-row literal, e.g. `ComplexMatrix::from_rows({{1, 2}, {3, 4}})`.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix identity(Index n);
  static ComplexMatrix zero(Index rows, Index cols) { return ComplexMatrix(rows, cols); }

  Index rows() const noexcept { return data_.rows(); }
  Index cols() const noexcept { return data_.cols(); }
  Index size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows() == cols(); }
  bool empty() const noexcept { return data_.size() == 0; }

  Complex operator()(Index i, Index j) const { return data_(i, j); }

  const DenseMatrix& dense() const noexcept { return data_; }

  /// True when every entry is exactly zero.
  bool is_zero() const;

 private:
  DenseMatrix data_;
};

/// Rank and residual thresholds consumed by every floating-point decision.
///
/// A rank_rtol of 0 selects the shape-dependent default max(rows, cols) * eps.
class ToleranceModel {
 public:
  static constexpr double kDefaultResidualAtol = 1e-10;

  ToleranceModel() = default;
  ToleranceModel(double rank_rtol, double residual_atol);

  double rank_rtol() const noexcept { return rank_rtol_; }
  double residual_atol() const noexcept { return residual_atol_; }

  /// Relative singular-value cutoff applied to a rows x cols matrix.
  double rank_cutoff(Index rows, Index cols) const noexcept;

  /// Magnitude below which no matrix is measured: rank decisions use
  /// rank_cutoff * max(sigma_max, reference_scale, reference_floor). Routines
  /// that rescale their inputs to unit norm set it to 1 so that rounding noise
  /// inherited from the unscaled factors is not mistaken for rank.
  double reference_floor() const noexcept { return reference_floor_; }

  ToleranceModel with_residual_atol(double atol) const { return copy_with(rank_rtol_, atol, reference_floor_); }
  ToleranceModel with_rank_rtol(double rtol) const { return copy_with(rtol, residual_atol_, reference_floor_); }
  ToleranceModel with_reference_floor(double floor) const;

 private:
  static ToleranceModel copy_with(double rtol, double atol, double floor);

  double rank_rtol_ = 0.0;
  double residual_atol_ = kDefaultResidualAtol;
  double reference_floor_ = 0.0;
};

struct SVDResult {
  ComplexMatrix u;                      // m x m unitary
  std::vector<double> singular_values;  // nonincreasing, length min(m, n)
  ComplexMatrix v;                      // n x n unitary
};

struct QRResult {
  ComplexMatrix q;                  // m x m unitary
  ComplexMatrix r;                  // m x n upper triangular
  std::vector<Index> permutation;   // column j of A*P is column permutation[j] of A
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex s);
ComplexMatrix conjugate_transpose(const ComplexMatrix& a);

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }
inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) { return add(a, b); }
inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) { return subtract(a, b); }
inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) { return scale(a, s); }
inline ComplexMatrix operator-(const ComplexMatrix& a) { return scale(a, -1.0); }

double frobenius_norm(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);

/// ||a - b||_F / max(1, ||a||_F, ||b||_F).
double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Singular values only, nonincreasing.
std::vector<double> singular_values(const ComplexMatrix& a);

SVDResult svd(const ComplexMatrix& a);

/// A*P = Q*R with |r_11| >= |r_22| >= ...
QRResult qr_column_pivoted(const ComplexMatrix& a);

/// Number of singular values above rank_cutoff * max(sigma_max, reference_scale).
///
/// `reference_scale` lets callers supply the magnitude the input was computed
/// from (for a power B^j, sigma_max(B)^j), so roundoff in a product that is
/// exactly zero is not mistaken for signal.
Index rank(const ComplexMatrix& a, const ToleranceModel& tol = {}, double reference_scale = 0.0);

/// Number of |r_ii| above rank_cutoff * |r_11|.
Index qr_rank(const QRResult& qr, const ToleranceModel& tol = {});

// Block helpers. Offsets and extents are checked.
ComplexMatrix block(const ComplexMatrix& a, Index row, Index col, Index rows, Index cols);
ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right);
ComplexMatrix vstack(const ComplexMatrix& top, const ComplexMatrix& bottom);
ComplexMatrix assemble_blocks(const ComplexMatrix& top_left, const ComplexMatrix& top_right,
                              const ComplexMatrix& bottom_left, const ComplexMatrix& bottom_right);

/// Inverse of a square matrix; DomainError when numerically singular.
ComplexMatrix inverse(const ComplexMatrix& a, const ToleranceModel& tol = {});

}  // namespace geninv
