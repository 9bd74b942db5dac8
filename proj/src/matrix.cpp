#include "geninv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace geninv {

namespace {

using ColMajor = Eigen::MatrixXcd;

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const DenseMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw NumericError("non-finite entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

std::string shape_of(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": " + shape_of(a) + " vs " + shape_of(b));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(Index rows, Index cols) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  data_ = DenseMatrix::Zero(rows, cols);
}

ComplexMatrix::ComplexMatrix(Index rows, Index cols, std::vector<Complex> entries) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  if (static_cast<Index>(entries.size()) != rows * cols) {
    throw ShapeError("expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(entries.size()));
  }
  data_ = Eigen::Map<const DenseMatrix>(entries.data(), rows, cols);
  require_finite(data_);
}

ComplexMatrix::ComplexMatrix(DenseMatrix data) : data_(std::move(data)) { require_finite(data_); }

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n_rows = static_cast<Index>(rows.size());
  const auto n_cols = n_rows == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(n_rows * n_cols));
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n_cols) throw ShapeError("ragged row in matrix literal");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(n_rows, n_cols, std::move(entries));
}

ComplexMatrix ComplexMatrix::identity(Index n) {
  return ComplexMatrix(DenseMatrix::Identity(n, n));
}

bool ComplexMatrix::is_zero() const {
  for (Index i = 0; i < rows(); ++i)
    for (Index j = 0; j < cols(); ++j)
      if (data_(i, j) != Complex{}) return false;
  return true;
}

ToleranceModel::ToleranceModel(double rank_rtol, double residual_atol)
    : rank_rtol_(rank_rtol), residual_atol_(residual_atol) {
  if (!(rank_rtol == 0.0 || rank_rtol >= kEps) || !std::isfinite(rank_rtol)) {
    throw DomainError("rank_rtol must be 0 (default) or at least machine epsilon");
  }
  if (!(residual_atol >= 0.0) || !std::isfinite(residual_atol)) {
    throw DomainError("residual_atol must be a nonnegative finite number");
  }
}

ToleranceModel ToleranceModel::with_reference_floor(double floor) const {
  if (!(floor >= 0.0) || !std::isfinite(floor)) throw DomainError("reference_floor must be nonnegative and finite");
  return copy_with(rank_rtol_, residual_atol_, floor);
}

ToleranceModel ToleranceModel::copy_with(double rtol, double atol, double floor) {
  ToleranceModel out(rtol, atol);
  out.reference_floor_ = floor;
  return out;
}

double ToleranceModel::rank_cutoff(Index rows, Index cols) const noexcept {
  if (rank_rtol_ > 0.0) return rank_rtol_;
  return static_cast<double>(std::max<Index>({rows, cols, 1})) * kEps;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("multiply: " + shape_of(a) + " times " + shape_of(b));
  }
  return ComplexMatrix(DenseMatrix(a.dense() * b.dense()));
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "add");
  return ComplexMatrix(DenseMatrix(a.dense() + b.dense()));
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "subtract");
  return ComplexMatrix(DenseMatrix(a.dense() - b.dense()));
}

ComplexMatrix scale(const ComplexMatrix& a, Complex s) {
  return ComplexMatrix(DenseMatrix(a.dense() * s));
}

ComplexMatrix conjugate_transpose(const ComplexMatrix& a) {
  return ComplexMatrix(DenseMatrix(a.dense().adjoint()));
}

double frobenius_norm(const ComplexMatrix& a) { return a.dense().norm(); }

double spectral_norm(const ComplexMatrix& a) {
  const auto sv = singular_values(a);
  return sv.empty() ? 0.0 : sv.front();
}

double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "relative_distance");
  const double denom = std::max({1.0, frobenius_norm(a), frobenius_norm(b)});
  return (a.dense() - b.dense()).norm() / denom;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  if (a.empty()) return {};
  Eigen::JacobiSVD<ColMajor> solver(ColMajor(a.dense()));
  if (solver.info() != Eigen::Success) throw NumericError("SVD did not converge");
  const auto& s = solver.singularValues();
  return {s.data(), s.data() + s.size()};
}

SVDResult svd(const ComplexMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (a.empty()) {
    return {ComplexMatrix::identity(m), {}, ComplexMatrix::identity(n)};
  }
  Eigen::JacobiSVD<ColMajor> solver(ColMajor(a.dense()), Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    // Eigen's two-sided Jacobi sweep does not report its iteration count.
    throw NumericError("SVD did not converge (Jacobi sweeps exhausted)");
  }
  const auto& s = solver.singularValues();
  return {ComplexMatrix(DenseMatrix(solver.matrixU())),
          std::vector<double>(s.data(), s.data() + s.size()),
          ComplexMatrix(DenseMatrix(solver.matrixV()))};
}

QRResult qr_column_pivoted(const ComplexMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;
  if (a.empty()) return {ComplexMatrix::identity(m), ComplexMatrix(m, n), perm};

  Eigen::ColPivHouseholderQR<ColMajor> qr(ColMajor(a.dense()));
  ColMajor q = qr.householderQ();
  ColMajor r = qr.matrixQR().triangularView<Eigen::Upper>();
  const auto& indices = qr.colsPermutation().indices();
  for (Index j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = indices(j);
  return {ComplexMatrix(DenseMatrix(q)), ComplexMatrix(DenseMatrix(r)), perm};
}

Index rank(const ComplexMatrix& a, const ToleranceModel& tol, double reference_scale) {
  const auto sv = singular_values(a);
  if (sv.empty()) return 0;
  const double scale = std::max({sv.front(), reference_scale, tol.reference_floor()});
  if (scale == 0.0) return 0;
  const double cutoff = tol.rank_cutoff(a.rows(), a.cols()) * scale;
  return static_cast<Index>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cutoff; }));
}

Index qr_rank(const QRResult& qr, const ToleranceModel& tol) {
  const Index diag = std::min(qr.r.rows(), qr.r.cols());
  if (diag == 0) return 0;
  const double lead = std::max(std::abs(qr.r(0, 0)), tol.reference_floor());
  if (lead == 0.0) return 0;
  const double cutoff = tol.rank_cutoff(qr.r.rows(), qr.r.cols()) * lead;
  Index count = 0;
  for (Index i = 0; i < diag; ++i)
    if (std::abs(qr.r(i, i)) > cutoff) ++count;
  return count;
}

ComplexMatrix block(const ComplexMatrix& a, Index row, Index col, Index rows, Index cols) {
  if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > a.rows() || col + cols > a.cols()) {
    throw ShapeError("block (" + std::to_string(row) + ", " + std::to_string(col) + ") of extent " +
                     std::to_string(rows) + "x" + std::to_string(cols) + " outside " + shape_of(a));
  }
  return ComplexMatrix(DenseMatrix(a.dense().block(row, col, rows, cols)));
}

ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right) {
  if (left.rows() != right.rows()) throw ShapeError("hstack: " + shape_of(left) + " | " + shape_of(right));
  DenseMatrix out(left.rows(), left.cols() + right.cols());
  out << left.dense(), right.dense();
  return ComplexMatrix(std::move(out));
}

ComplexMatrix vstack(const ComplexMatrix& top, const ComplexMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw ShapeError("vstack: " + shape_of(top) + " over " + shape_of(bottom));
  DenseMatrix out(top.rows() + bottom.rows(), top.cols());
  out << top.dense(), bottom.dense();
  return ComplexMatrix(std::move(out));
}

ComplexMatrix assemble_blocks(const ComplexMatrix& top_left, const ComplexMatrix& top_right,
                              const ComplexMatrix& bottom_left, const ComplexMatrix& bottom_right) {
  return vstack(hstack(top_left, top_right), hstack(bottom_left, bottom_right));
}

ComplexMatrix inverse(const ComplexMatrix& a, const ToleranceModel& tol) {
  if (!a.is_square()) throw ShapeError("inverse of non-square " + shape_of(a));
  if (a.empty()) return a;
  if (rank(a, tol) < a.rows()) throw DomainError("inverse: matrix is numerically singular");
  return ComplexMatrix(DenseMatrix(ColMajor(a.dense()).fullPivLu().inverse()));
}

}  // namespace geninv
