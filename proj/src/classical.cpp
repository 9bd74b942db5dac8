#include "geninv/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geninv {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) {
    throw ShapeError(std::string(op) + ": expected a square matrix, got " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()));
  }
}

Index index_at_most_one(const ComplexMatrix& a, const ToleranceModel& tol, const char* what) {
  const Index k = matrix_index(a, tol).index;
  if (k > 1) {
    throw IndexError(std::string(what) + " requires Ind(A) <= 1, computed index " + std::to_string(k),
                     static_cast<std::size_t>(k));
  }
  return k;
}

}  // namespace

ComplexMatrix drazin(const ComplexMatrix& a, const ToleranceModel& tol) {
  require_square(a, "drazin");
  const Index k = matrix_index(a, tol).index;
  if (k == 0) return inverse(a, tol);
  // A^k (A^{2k+1})^+ A^k evaluated through the compact SVD A^k = U S V*:
  // A^{2k+1} = U (S V* A U S) V*, so the product collapses to U (V* A U)^{-1} V*.
  // Same value, but the conditioning is that of V* A U rather than of A^{2k+1}.
  const ComplexMatrix ak = power(a, k);
  const Index r = rank(ak, tol.with_reference_floor(0.0), power_reference(spectral_norm(a), k, tol));
  if (r == 0) return ComplexMatrix(a.rows(), a.cols());
  const SVDResult d = svd(ak);
  const ComplexMatrix u = block(d.u, 0, 0, a.rows(), r);
  const ComplexMatrix v = block(d.v, 0, 0, a.rows(), r);
  return u * inverse(conjugate_transpose(v) * a * u, tol.with_reference_floor(0.0)) * conjugate_transpose(v);
}

ComplexMatrix group_inverse(const ComplexMatrix& a, const ToleranceModel& tol) {
  require_square(a, "group_inverse");
  index_at_most_one(a, tol, "group inverse");
  return drazin(a, tol);
}

ComplexMatrix core_inverse(const ComplexMatrix& a, const ToleranceModel& tol) {
  require_square(a, "core_inverse");
  index_at_most_one(a, tol, "core inverse");
  return drazin(a, tol) * a * pinv(a, tol);
}

ComplexMatrix core_ep(const ComplexMatrix& a, const ToleranceModel& tol) {
  require_square(a, "core_ep");
  return qbt_inverse(a, QBTParams(matrix_index(a, tol).index), tol);
}

ComplexMatrix bt_inverse(const ComplexMatrix& a, const ToleranceModel& tol) {
  require_square(a, "bt_inverse");
  return qbt_inverse(a, QBTParams(1), tol);
}

ComplexMatrix qbt_inverse(const ComplexMatrix& a, QBTParams params, const ToleranceModel& tol) {
  require_square(a, "qbt_inverse");
  if (params.q == 0) return pinv(a, tol);  // P_{A^0} = I
  // Homogeneous of degree -1: solve for A / alpha with reference magnitude 1.
  const double alpha = std::max(spectral_norm(a), tol.reference_floor());
  if (alpha == 0.0) return a;
  const ComplexMatrix unit = scale(a, 1.0 / alpha);
  const ToleranceModel utol = tol.with_reference_floor(1.0);
  const PowerProjection proj = power_projection(unit, params.q, utol);
  const double reference = projected_reference(spectral_norm(unit), proj, utol, a.rows(), a.cols());
  return scale(pinv(unit * proj.projector, utol, reference), 1.0 / alpha);
}

bool outer_inverse_check(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& range_gen,
                         const ComplexMatrix& null_gen, const ToleranceModel& tol) {
  if (x.rows() != a.cols() || x.cols() != a.rows()) throw ShapeError("outer_inverse_check: X must be shaped like A*");
  if (range_gen.rows() != x.rows()) throw ShapeError("outer_inverse_check: range generator row mismatch");
  if (null_gen.cols() != x.cols()) throw ShapeError("outer_inverse_check: null-space generator column mismatch");
  if (relative_distance(x * a * x, x) > tol.residual_atol()) return false;
  return range_equal(x, range_gen, tol) && nullspace_equal(x, null_gen, tol);
}

}  // namespace geninv
