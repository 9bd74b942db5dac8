#pragma once

#include <utility>

#include "geninv/classical.hpp"
#include "geninv/matrix.hpp"
#include "geninv/weighted.hpp"

namespace geninv {

/// A = U [[T, S], [0, N]] U* with T nonsingular r x r, r = rank(A^k), and N
/// nilpotent of index k = Ind(A).
struct CoreEPDecomposition {
  ComplexMatrix u;
  ComplexMatrix t;
  ComplexMatrix s;
  ComplexMatrix nil;
  Index index = 0;

  // Validation residuals, always filled in.
  double unitarity_residual = 0.0;
  double reconstruction_residual = 0.0;  // relative to max(1, ||A||_F)
  double nilpotency_residual = 0.0;      // ||N^k||_F relative to max(1, ||N||)^k
  double t_sigma_min = 0.0;              // smallest singular value of T
  // ||U2* A U1||_F / ||A||_F, the block that should vanish. It measures how
  // accurately U1 spans R(A^k) and sets the rank tolerance for block formulas.
  double partition_residual = 0.0;

  Index rank() const noexcept { return t.rows(); }
  /// U [[T, S], [0, N]] U*.
  ComplexMatrix reconstruct() const;
};

/// A = U [[A1, A2], [0, A3]] V*, W = V [[W1, W2], [0, W3]] U* with A1, W1
/// nonsingular t x t and A3 W3, W3 A3 nilpotent of indices Ind(AW), Ind(WA).
struct WeightedCoreEPDecomposition {
  ComplexMatrix u;  // m x m
  ComplexMatrix v;  // n x n
  ComplexMatrix a1, a2, a3;
  ComplexMatrix w1, w2, w3;
  Index t_dim = 0;
  Index ind_aw = 0;
  Index ind_wa = 0;

  double unitarity_residual = 0.0;       // max over U and V
  double reconstruction_residual = 0.0;  // max over A and W, relative
  double nilpotency_residual = 0.0;      // max over A3W3 and W3A3, relative
  double a1_sigma_min = 0.0;
  double w1_sigma_min = 0.0;
  double partition_residual = 0.0;  // max over the vanishing blocks of A and W, relative
  Index nilpotent_index_aw = 0;  // Ind(A3 W3), measured
  Index nilpotent_index_wa = 0;  // Ind(W3 A3), measured

  Index rows() const noexcept { return u.rows(); }
  Index cols() const noexcept { return v.rows(); }
  ComplexMatrix reconstruct_a() const;
  ComplexMatrix reconstruct_w() const;
};

CoreEPDecomposition core_ep_decompose(const ComplexMatrix& a, const ToleranceModel& tol = {});

/// Throws DecompositionError when any validation residual exceeds tolerance.
WeightedCoreEPDecomposition weighted_core_ep_decompose(const WeightedPair& p, const ToleranceModel& tol = {});

/// A^+ for A = U [[A1, A2], [0, A3]] V* with A1 nonsingular, assembled blockwise:
///
///   V [[A1* Om,             -A1* Om A2 A3^+                 ],
///      [(I - Q_A3) A2* Om,   A3^+ - (I - Q_A3) A2* Om A2 A3^+]] U*
///
/// where Om = [A1 A1* + A2 (I - Q_A3) A2*]^{-1}.
ComplexMatrix block_pinv(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& a1,
                         const ComplexMatrix& a2, const ComplexMatrix& a3, const ToleranceModel& tol = {});

/// P_A = U diag(I_t, P_A3) U* for the same partition. Pass reference_scale =
/// ||A|| when A3 carries rounding noise of that size.
ComplexMatrix block_range_projector(const ComplexMatrix& u, Index t, const ComplexMatrix& a3,
                                    const ToleranceModel& tol = {}, double reference_scale = 0.0);

/// M = W1 A1 W2 + W1 A2 W3 + W2 A3 W3 and the t x t matrix Omega_W.
struct CanonicalParts {
  ComplexMatrix m_block;
  ComplexMatrix omega;
};

/// A^{q,W} assembled from the weighted core-EP decomposition.
std::pair<ComplexMatrix, CanonicalParts> canonical_weighted_qbt(const WeightedCoreEPDecomposition& d,
                                                                QBTParams params, const ToleranceModel& tol = {});

/// A^{q-BT} from a core-EP decomposition. Returns the inverse and Delta.
std::pair<ComplexMatrix, ComplexMatrix> canonical_qbt_with_delta(const CoreEPDecomposition& d, QBTParams params,
                                                                 const ToleranceModel& tol = {});

ComplexMatrix canonical_qbt(const CoreEPDecomposition& d, QBTParams params, const ToleranceModel& tol = {});

/// Block forms of (AW)^{q-BT} and (WA)^{q-BT} read off a weighted
/// decomposition; AW is framed by U and WA by V.
std::pair<ComplexMatrix, ComplexMatrix> canonical_qbt_products(const WeightedCoreEPDecomposition& d,
                                                               QBTParams params, const ToleranceModel& tol = {});

namespace detail {

/// Two expressions for the trailing-block projector difference used in the
/// canonical form: P (I - Q_{W3 A3 W3 P}) P and P - P_{A3^{q,W3}}, with
/// P = P_{(A3 W3)^q}. They are equal.
std::pair<ComplexMatrix, ComplexMatrix> trailing_projector_forms(const WeightedCoreEPDecomposition& d, Index q,
                                                                 const ToleranceModel& tol = {});

}  // namespace detail

}  // namespace geninv
