#pragma once

#include <tuple>
#include <utility>

#include "geninv/classical.hpp"
#include "geninv/matrix.hpp"

namespace geninv {

/// A validated pair (A, W) with A m x n and nonzero W n x m.
///
/// Ind(AW), Ind(WA) and k = max of both are computed once at construction.
class WeightedPair {
 public:
  WeightedPair(ComplexMatrix a, ComplexMatrix w, const ToleranceModel& tol = {});

  const ComplexMatrix& a() const noexcept { return a_; }
  const ComplexMatrix& w() const noexcept { return w_; }
  const ComplexMatrix& aw() const noexcept { return aw_; }
  const ComplexMatrix& wa() const noexcept { return wa_; }
  /// W A W.
  const ComplexMatrix& waw() const noexcept { return waw_; }

  Index rows() const noexcept { return a_.rows(); }
  Index cols() const noexcept { return a_.cols(); }
  Index ind_aw() const noexcept { return ind_aw_; }
  Index ind_wa() const noexcept { return ind_wa_; }
  Index k() const noexcept { return k_; }

 private:
  ComplexMatrix a_;
  ComplexMatrix w_;
  ComplexMatrix aw_;
  ComplexMatrix wa_;
  ComplexMatrix waw_;
  Index ind_aw_ = 0;
  Index ind_wa_ = 0;
  Index k_ = 0;
};

/// A^{d,W} = A [(WA)^d]^2.
ComplexMatrix weighted_drazin(const WeightedPair& p, const ToleranceModel& tol = {});

/// A^{core-EP,W} = (WAW P_{(AW)^k})^+.
ComplexMatrix weighted_core_ep(const WeightedPair& p, const ToleranceModel& tol = {});

/// A^{BT,W} = (WAW P_{AW})^+.
ComplexMatrix weighted_bt(const WeightedPair& p, const ToleranceModel& tol = {});

/// The W-weighted q-BT inverse (WAW P_{(AW)^q})^+, shape m x n.
ComplexMatrix weighted_qbt(const WeightedPair& p, QBTParams params, const ToleranceModel& tol = {});

/// Same formula without the W != 0 requirement. Used on the trailing blocks
/// (A3, W3) of a weighted core-EP decomposition, where W3 may vanish.
ComplexMatrix weighted_qbt_formula(const ComplexMatrix& a, const ComplexMatrix& w, Index q,
                                   const ToleranceModel& tol = {});

/// The two product forms [W (AW)^{q+1} ((AW)^q)^+]^+ and
/// [(WA)^{q+1} W ((AW)^q)^+]^+.
std::pair<ComplexMatrix, ComplexMatrix> weighted_qbt_product_forms(const WeightedPair& p, QBTParams params,
                                                                   const ToleranceModel& tol = {});

/// (W [(AW)^{q-BT}]^+)^+.
ComplexMatrix weighted_qbt_via_square(const WeightedPair& p, QBTParams params, const ToleranceModel& tol = {});

/// (AW)^{l-1} A = A (WA)^{l-1}, to residual_atol.
bool cline_shift_check(const WeightedPair& p, Index ell, const ToleranceModel& tol = {});

/// (A^{q,W}, [(AW)^{q-BT}]^2 A, A [(WA)^{q-BT}]^2). The three coincide for the
/// weighted Drazin and core-EP inverses but not in general for 1 <= q < k.
struct DualRepresentation {
  ComplexMatrix weighted;
  ComplexMatrix left;   // [(AW)^{q-BT}]^2 A
  ComplexMatrix right;  // A [(WA)^{q-BT}]^2
};

DualRepresentation dual_representation_gap(const WeightedPair& p, QBTParams params, const ToleranceModel& tol = {});

}  // namespace geninv
