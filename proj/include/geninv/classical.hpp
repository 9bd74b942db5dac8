#pragma once

#include "geninv/matrix.hpp"
#include "geninv/projectors.hpp"

namespace geninv {

/// Parameter q of the q-BT family; q = 0 gives A^+, q = 1 the BT inverse,
/// q >= Ind(A) the core-EP inverse.
struct QBTParams {
  Index q = 0;

  explicit QBTParams(Index q_) : q(q_) {
    if (q < 0) throw DomainError("q must be nonnegative");
  }
};

/// A^d = A^k (A^{2k+1})^+ A^k with k = Ind(A), evaluated as U (V* A U)^{-1} V*
/// from the compact SVD A^k = U S V*.
ComplexMatrix drazin(const ComplexMatrix& a, const ToleranceModel& tol = {});

/// A^# (Drazin inverse of an index <= 1 matrix). Throws IndexError otherwise.
ComplexMatrix group_inverse(const ComplexMatrix& a, const ToleranceModel& tol = {});

/// Core inverse A^# A A^+ (index <= 1 only).
ComplexMatrix core_inverse(const ComplexMatrix& a, const ToleranceModel& tol = {});

/// A^(core-EP) = (A P_{A^k})^+ with k = Ind(A).
ComplexMatrix core_ep(const ComplexMatrix& a, const ToleranceModel& tol = {});

/// BT inverse (A P_A)^+.
ComplexMatrix bt_inverse(const ComplexMatrix& a, const ToleranceModel& tol = {});

/// q-BT inverse (A P_{A^q})^+.
ComplexMatrix qbt_inverse(const ComplexMatrix& a, QBTParams params, const ToleranceModel& tol = {});

/// True iff X A X = X, R(X) = R(range_gen) and N(X) = N(null_gen), i.e. X is the
/// outer inverse of A with the prescribed range and null space.
bool outer_inverse_check(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& range_gen,
                         const ComplexMatrix& null_gen, const ToleranceModel& tol = {});

}  // namespace geninv
