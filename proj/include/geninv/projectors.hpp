#pragma once

#include <vector>

#include "geninv/matrix.hpp"

namespace geninv {

/// Ind(B) together with the rank sequence rank(B^j), j = 0..index+1.
struct IndexReport {
  Index index = 0;
  std::vector<Index> rank_sequence;
};

/// Moore-Penrose inverse via SVD with a relative cutoff. See `rank` for the
/// meaning of `reference_scale`.
ComplexMatrix pinv(const ComplexMatrix& a, const ToleranceModel& tol = {}, double reference_scale = 0.0);

/// P_B = B B^+, the orthogonal projector onto R(B).
ComplexMatrix proj_range(const ComplexMatrix& b, const ToleranceModel& tol = {});

/// Q_B = B^+ B, the orthogonal projector onto R(B*).
ComplexMatrix proj_corange(const ComplexMatrix& b, const ToleranceModel& tol = {});

/// B^q for square B, with B^0 = I.
ComplexMatrix power(const ComplexMatrix& b, Index q);

/// Magnitude of the rounding noise carried by B^q, up to eps:
/// ||B||^{q-1} max(||B||, reference_floor). 1 for q = 0.
double power_reference(double norm, Index q, const ToleranceModel& tol);

/// P_{B^q}. q = 0 gives the identity exactly; for q >= 1 rank decisions are
/// made against power_reference, the scale B^q was computed from.
ComplexMatrix power_projector(const ComplexMatrix& b, Index q, const ToleranceModel& tol = {});

/// P_{B^q} with `leakage` = max(sigma_{r+1}, rank_cutoff * power_reference)
/// / sigma_r of B^q (0 when nothing was discarded): an estimate of how far the
/// computed range tilts out of the true one.
struct PowerProjection {
  ComplexMatrix projector;
  double leakage = 0.0;
};
PowerProjection power_projection(const ComplexMatrix& b, Index q, const ToleranceModel& tol = {});

/// Reference scale for pinv(M P) with ||M|| = `norm` and P from `projection`:
/// the product inherits noise of size ||M|| * leakage, which must not count
/// as rank.
double projected_reference(double norm, const PowerProjection& projection, const ToleranceModel& tol, Index rows,
                           Index cols);

/// Smallest k >= 0 with rank(B^k) = rank(B^{k+1}); search capped at k <= n.
IndexReport matrix_index(const ComplexMatrix& b, const ToleranceModel& tol = {});

/// R(X) subset of R(Y), decided by rank([Y | X]) = rank(Y).
///
/// Both operands are normalised to unit Frobenius norm and the rank cutoff is
/// max(rank cutoff, residual_atol), so the relation is judged to the same
/// tolerance as the equation checks.
bool range_contained(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol = {});

/// N(Y) subset of N(X), decided by rank([Y; X]) = rank(Y).
bool nullspace_contained(const ComplexMatrix& y, const ComplexMatrix& x, const ToleranceModel& tol = {});

/// R(X) = R(Y).
bool range_equal(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol = {});

/// N(X) = N(Y).
bool nullspace_equal(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol = {});

}  // namespace geninv
