#include "geninv/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace geninv {

namespace {

// Every weighted inverse here satisfies X(aA, wW) = X(A, W) / (a w^2). Working
// on unit-norm factors with reference floor 1 measures all rank decisions
// against the size of the factors rather than that of a product, whose own
// sigma_max can sit far below the rounding noise it carries.
struct UnitPair {
  ComplexMatrix a, w, aw, wa, waw;
  double factor = 1.0;
  ToleranceModel tol;
};

double unit_scale(const ComplexMatrix& b, const ToleranceModel& tol) {
  const double s = std::max(spectral_norm(b), tol.reference_floor());
  return s == 0.0 ? 1.0 : s;
}

UnitPair unit_pair(const ComplexMatrix& a, const ComplexMatrix& w, const ToleranceModel& tol) {
  const double alpha = unit_scale(a, tol);
  const double omega = unit_scale(w, tol);
  UnitPair u;
  u.a = scale(a, 1.0 / alpha);
  u.w = scale(w, 1.0 / omega);
  u.aw = u.a * u.w;
  u.wa = u.w * u.a;
  u.waw = u.w * u.aw;
  u.factor = 1.0 / (alpha * omega * omega);
  u.tol = tol.with_reference_floor(1.0);
  return u;
}

}  // namespace

WeightedPair::WeightedPair(ComplexMatrix a, ComplexMatrix w, const ToleranceModel& tol)
    : a_(std::move(a)), w_(std::move(w)) {
  if (a_.rows() != w_.cols() || a_.cols() != w_.rows()) {
    throw ShapeError("weighted pair: A is " + std::to_string(a_.rows()) + "x" + std::to_string(a_.cols()) +
                     " but W is " + std::to_string(w_.rows()) + "x" + std::to_string(w_.cols()));
  }
  if (w_.is_zero()) throw DomainError("weighted pair: W must be nonzero");
  aw_ = a_ * w_;
  wa_ = w_ * a_;
  waw_ = w_ * aw_;
  ind_aw_ = matrix_index(aw_, tol).index;
  ind_wa_ = matrix_index(wa_, tol).index;
  k_ = std::max(ind_aw_, ind_wa_);
  if (std::abs(ind_aw_ - ind_wa_) > 1) {
    throw NumericError("weighted pair: Ind(AW) = " + std::to_string(ind_aw_) + " and Ind(WA) = " +
                       std::to_string(ind_wa_) + " differ by more than one; rank tolerance misclassified");
  }
}

ComplexMatrix weighted_drazin(const WeightedPair& p, const ToleranceModel& tol) {
  const UnitPair u = unit_pair(p.a(), p.w(), tol);
  const ComplexMatrix d = drazin(u.wa, u.tol);
  return scale(u.a * d * d, u.factor);
}

ComplexMatrix weighted_core_ep(const WeightedPair& p, const ToleranceModel& tol) {
  return weighted_qbt(p, QBTParams(p.k()), tol);
}

ComplexMatrix weighted_bt(const WeightedPair& p, const ToleranceModel& tol) {
  return weighted_qbt(p, QBTParams(1), tol);
}

ComplexMatrix weighted_qbt(const WeightedPair& p, QBTParams params, const ToleranceModel& tol) {
  return weighted_qbt_formula(p.a(), p.w(), params.q, tol);
}

ComplexMatrix weighted_qbt_formula(const ComplexMatrix& a, const ComplexMatrix& w, Index q,
                                   const ToleranceModel& tol) {
  if (a.rows() != w.cols() || a.cols() != w.rows()) throw ShapeError("weighted_qbt_formula: W must be shaped like A*");
  if (q < 0) throw DomainError("q must be nonnegative");
  const UnitPair u = unit_pair(a, w, tol);
  const PowerProjection proj = power_projection(u.aw, q, u.tol);
  const double reference = projected_reference(spectral_norm(u.waw), proj, u.tol, w.rows(), w.cols());
  return scale(pinv(u.waw * proj.projector, u.tol, reference), u.factor);
}

std::pair<ComplexMatrix, ComplexMatrix> weighted_qbt_product_forms(const WeightedPair& p, QBTParams params,
                                                                   const ToleranceModel& tol) {
  const Index q = params.q;
  const UnitPair u = unit_pair(p.a(), p.w(), tol);
  const ComplexMatrix awq = power(u.aw, q);
  const double reference = power_reference(spectral_norm(u.aw), q, u.tol);
  const ComplexMatrix awq_pinv = q == 0 ? awq : pinv(awq, u.tol.with_reference_floor(0.0), reference);
  // Each product carries rounding noise of the size of its factors' norms
  // multiplied together; ((AW)^q)^+ can be large, so that is the reference.
  const ComplexMatrix aw_next = power(u.aw, q + 1);
  const ComplexMatrix wa_next = power(u.wa, q + 1);
  const double w_norm = spectral_norm(u.w);
  const double pinv_norm = spectral_norm(awq_pinv);
  const ComplexMatrix via_aw = pinv(u.w * aw_next * awq_pinv, u.tol, w_norm * spectral_norm(aw_next) * pinv_norm);
  const ComplexMatrix via_wa = pinv(wa_next * u.w * awq_pinv, u.tol, spectral_norm(wa_next) * w_norm * pinv_norm);
  return {scale(via_aw, u.factor), scale(via_wa, u.factor)};
}

ComplexMatrix weighted_qbt_via_square(const WeightedPair& p, QBTParams params, const ToleranceModel& tol) {
  const UnitPair u = unit_pair(p.a(), p.w(), tol);
  const ComplexMatrix square = qbt_inverse(u.aw, params, u.tol);
  return scale(pinv(u.w * pinv(square, u.tol), u.tol), u.factor);
}

bool cline_shift_check(const WeightedPair& p, Index ell, const ToleranceModel& tol) {
  if (ell < 1) throw DomainError("cline_shift_check: ell must be at least 1");
  const ComplexMatrix left = power(p.aw(), ell - 1) * p.a();
  const ComplexMatrix right = p.a() * power(p.wa(), ell - 1);
  return relative_distance(left, right) <= tol.residual_atol();
}

DualRepresentation dual_representation_gap(const WeightedPair& p, QBTParams params, const ToleranceModel& tol) {
  const ComplexMatrix aw_qbt = qbt_inverse(p.aw(), params, tol);
  const ComplexMatrix wa_qbt = qbt_inverse(p.wa(), params, tol);
  return {weighted_qbt(p, params, tol), aw_qbt * aw_qbt * p.a(), p.a() * wa_qbt * wa_qbt};
}

}  // namespace geninv
