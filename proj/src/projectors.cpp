#include "geninv/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geninv {

namespace {

ComplexMatrix normalized(const ComplexMatrix& a) {
  const double n = frobenius_norm(a);
  return n == 0.0 ? a : scale(a, 1.0 / n);
}

ToleranceModel predicate_tolerance(const ToleranceModel& tol, Index rows, Index cols) {
  return tol.with_rank_rtol(std::max(tol.rank_cutoff(rows, cols), tol.residual_atol()));
}

void require_square(const ComplexMatrix& b, const char* op) {
  if (!b.is_square()) {
    throw ShapeError(std::string(op) + ": expected a square matrix, got " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  }
}

}  // namespace

double power_reference(double norm, Index q, const ToleranceModel& tol) {
  if (q == 0) return 1.0;
  return std::pow(norm, static_cast<double>(q - 1)) * std::max(norm, tol.reference_floor());
}

namespace {

// SVD of `a` together with the number of singular values above the cutoff.
struct RetainedSVD {
  SVDResult d;
  Index kept = 0;
};

RetainedSVD retained_svd(const ComplexMatrix& a, const ToleranceModel& tol, double reference_scale) {
  RetainedSVD out{svd(a), 0};
  if (out.d.singular_values.empty()) return out;
  const double top = std::max({out.d.singular_values.front(), reference_scale, tol.reference_floor()});
  if (top == 0.0) return out;
  const double cutoff = tol.rank_cutoff(a.rows(), a.cols()) * top;
  for (double s : out.d.singular_values) {
    if (s <= cutoff) break;
    ++out.kept;
  }
  return out;
}

// Q_r Q_r* for the leading r columns of Q. Forming the projector from the
// orthonormal factor avoids the cond(B) growth of B * B^+.
ComplexMatrix leading_projector(const ComplexMatrix& q, Index r) {
  const auto cols = q.dense().leftCols(r);
  return ComplexMatrix(DenseMatrix(cols * cols.adjoint()));
}

}  // namespace

ComplexMatrix pinv(const ComplexMatrix& a, const ToleranceModel& tol, double reference_scale) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (a.empty()) return ComplexMatrix(n, m);
  const RetainedSVD r = retained_svd(a, tol, reference_scale);

  // X = V * diag(1/sigma) * U*, restricted to the retained singular triplets.
  DenseMatrix x = DenseMatrix::Zero(n, m);
  const auto& u = r.d.u.dense();
  const auto& v = r.d.v.dense();
  for (Index i = 0; i < r.kept; ++i) {
    x.noalias() += (v.col(i) / r.d.singular_values[static_cast<std::size_t>(i)]) * u.col(i).adjoint();
  }
  return ComplexMatrix(std::move(x));
}

ComplexMatrix proj_range(const ComplexMatrix& b, const ToleranceModel& tol) {
  if (b.empty()) return ComplexMatrix(b.rows(), b.rows());
  const RetainedSVD r = retained_svd(b, tol, 0.0);
  return leading_projector(r.d.u, r.kept);
}

ComplexMatrix proj_corange(const ComplexMatrix& b, const ToleranceModel& tol) {
  if (b.empty()) return ComplexMatrix(b.cols(), b.cols());
  const RetainedSVD r = retained_svd(b, tol, 0.0);
  return leading_projector(r.d.v, r.kept);
}

ComplexMatrix power(const ComplexMatrix& b, Index q) {
  require_square(b, "power");
  if (q < 0) throw DomainError("power: negative exponent");
  ComplexMatrix out = ComplexMatrix::identity(b.rows());
  for (Index j = 0; j < q; ++j) out = out * b;
  return out;
}

PowerProjection power_projection(const ComplexMatrix& b, Index q, const ToleranceModel& tol) {
  require_square(b, "power_projector");
  if (q == 0) return {ComplexMatrix::identity(b.rows()), 0.0};
  if (b.empty()) return {b, 0.0};
  const double reference = power_reference(spectral_norm(b), q, tol);
  const RetainedSVD r = retained_svd(power(b, q), tol.with_reference_floor(0.0), reference);
  PowerProjection out{leading_projector(r.d.u, r.kept), 0.0};
  const auto& sv = r.d.singular_values;
  if (r.kept > 0 && static_cast<std::size_t>(r.kept) < sv.size()) {
    // Subspace tilt is bounded by the perturbation over the gap; the
    // perturbation is at least the discarded tail and at least the rounding
    // noise B^q was formed with.
    const double noise = std::max(sv[static_cast<std::size_t>(r.kept)], tol.rank_cutoff(b.rows(), b.cols()) * reference);
    out.leakage = noise / sv[static_cast<std::size_t>(r.kept - 1)];
  }
  return out;
}

ComplexMatrix power_projector(const ComplexMatrix& b, Index q, const ToleranceModel& tol) {
  return power_projection(b, q, tol).projector;
}

double projected_reference(double norm, const PowerProjection& projection, const ToleranceModel& tol, Index rows,
                           Index cols) {
  // Safety factor on the measured leakage; the tilt of a computed singular
  // subspace exceeds the discarded-to-kept ratio by a small constant.
  constexpr double kLeakageSafety = 10.0;
  const double cutoff = tol.rank_cutoff(rows, cols);
  return norm * std::max(1.0, kLeakageSafety * projection.leakage / cutoff);
}

IndexReport matrix_index(const ComplexMatrix& b, const ToleranceModel& tol) {
  require_square(b, "matrix_index");
  const Index n = b.rows();
  IndexReport report;
  report.rank_sequence.push_back(n);
  if (n == 0) {
    report.rank_sequence.push_back(0);
    return report;
  }
  const double norm = spectral_norm(b);
  const ToleranceModel power_tol = tol.with_reference_floor(0.0);
  ComplexMatrix current = ComplexMatrix::identity(n);
  for (Index j = 1; j <= n + 1; ++j) {
    current = current * b;
    const double reference = power_reference(norm, j, tol);
    // Ranks of successive powers are nonincreasing; clamp roundoff that says otherwise.
    const Index r = std::min(rank(current, power_tol, reference), report.rank_sequence.back());
    report.rank_sequence.push_back(r);
    if (r == report.rank_sequence[static_cast<std::size_t>(j - 1)]) {
      report.index = j - 1;
      return report;
    }
  }
  // Unreachable: n + 1 strictly decreasing ranks would go below zero.
  throw NumericError("matrix_index: rank sequence failed to stabilise");
}

bool range_contained(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol) {
  if (x.rows() != y.rows()) {
    throw ShapeError("range_contained: row counts differ (" + std::to_string(x.rows()) + " vs " +
                     std::to_string(y.rows()) + ")");
  }
  const ComplexMatrix yn = normalized(y);
  const ComplexMatrix joined = hstack(yn, normalized(x));
  const ToleranceModel ptol = predicate_tolerance(tol, joined.rows(), joined.cols());
  return rank(joined, ptol) == rank(yn, ptol);
}

bool nullspace_contained(const ComplexMatrix& y, const ComplexMatrix& x, const ToleranceModel& tol) {
  if (x.cols() != y.cols()) {
    throw ShapeError("nullspace_contained: column counts differ (" + std::to_string(y.cols()) + " vs " +
                     std::to_string(x.cols()) + ")");
  }
  const ComplexMatrix yn = normalized(y);
  const ComplexMatrix joined = vstack(yn, normalized(x));
  const ToleranceModel ptol = predicate_tolerance(tol, joined.rows(), joined.cols());
  return rank(joined, ptol) == rank(yn, ptol);
}

bool range_equal(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol) {
  return range_contained(x, y, tol) && range_contained(y, x, tol);
}

bool nullspace_equal(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol) {
  return nullspace_contained(x, y, tol) && nullspace_contained(y, x, tol);
}

}  // namespace geninv
