#include "geninv/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geninv {

namespace {

double unitarity_defect(const ComplexMatrix& q) {
  return frobenius_norm(conjugate_transpose(q) * q - ComplexMatrix::identity(q.cols()));
}

double smallest_singular_value(const ComplexMatrix& a) {
  const auto sv = singular_values(a);
  return sv.empty() ? 0.0 : sv.back();
}

// ||B^k||_F / max(1, scale)^k, the size of what should vanish relative to the
// magnitude of the factors it was computed from.
double nilpotency_defect(const ComplexMatrix& b, Index k, double scale) {
  if (b.empty()) return 0.0;
  return frobenius_norm(power(b, k)) / std::pow(std::max(1.0, scale), static_cast<double>(k));
}

ComplexMatrix leading_columns(const ComplexMatrix& q, Index count) { return block(q, 0, 0, q.rows(), count); }

ComplexMatrix trailing_columns(const ComplexMatrix& q, Index count) {
  return block(q, 0, count, q.rows(), q.cols() - count);
}

Index power_rank(const ComplexMatrix& b, const ComplexMatrix& bk, Index k, const ToleranceModel& tol) {
  return rank(bk, tol.with_reference_floor(0.0), power_reference(spectral_norm(b), k, tol));
}

ComplexMatrix upper_block(const ComplexMatrix& tl, const ComplexMatrix& tr, const ComplexMatrix& br) {
  return assemble_blocks(tl, tr, ComplexMatrix(br.rows(), tl.cols()), br);
}

// Rounding noise in the diagonal blocks is as large as that in the block that
// should vanish; rank decisions on the blocks must not resolve below it.
constexpr double kPartitionSafety = 10.0;

ToleranceModel block_tolerance(const ToleranceModel& tol, Index rows, Index cols, double partition_residual) {
  const double rtol = std::max(tol.rank_cutoff(rows, cols), kPartitionSafety * partition_residual);
  return tol.with_rank_rtol(rtol).with_reference_floor(1.0);
}

double relative_norm(const ComplexMatrix& part, const ComplexMatrix& whole) {
  const double n = frobenius_norm(whole);
  return n == 0.0 ? 0.0 : frobenius_norm(part) / n;
}

double unit_scale(const ComplexMatrix& b, const ToleranceModel& tol) {
  const double s = std::max(spectral_norm(b), tol.reference_floor());
  return s == 0.0 ? 1.0 : s;
}

// The blocks of A and W divided by ||A|| and ||W||. Rounding noise in A3 and W3
// is proportional to those norms, not to the blocks' own size, so the block
// formulas run on these copies with reference floor 1.
struct UnitBlocks {
  WeightedCoreEPDecomposition d;
  double alpha = 1.0;
  double omega = 1.0;
  ToleranceModel tol;
};

UnitBlocks unit_blocks(const WeightedCoreEPDecomposition& d, const ToleranceModel& tol) {
  UnitBlocks out;
  out.alpha = unit_scale(upper_block(d.a1, d.a2, d.a3), tol);
  out.omega = unit_scale(upper_block(d.w1, d.w2, d.w3), tol);
  out.d = d;
  out.d.a1 = scale(d.a1, 1.0 / out.alpha);
  out.d.a2 = scale(d.a2, 1.0 / out.alpha);
  out.d.a3 = scale(d.a3, 1.0 / out.alpha);
  out.d.w1 = scale(d.w1, 1.0 / out.omega);
  out.d.w2 = scale(d.w2, 1.0 / out.omega);
  out.d.w3 = scale(d.w3, 1.0 / out.omega);
  out.tol = block_tolerance(tol, d.rows(), d.cols(), d.partition_residual);
  return out;
}

}  // namespace

ComplexMatrix CoreEPDecomposition::reconstruct() const {
  return u * upper_block(t, s, nil) * conjugate_transpose(u);
}

ComplexMatrix WeightedCoreEPDecomposition::reconstruct_a() const {
  return u * upper_block(a1, a2, a3) * conjugate_transpose(v);
}

ComplexMatrix WeightedCoreEPDecomposition::reconstruct_w() const {
  return v * upper_block(w1, w2, w3) * conjugate_transpose(u);
}

CoreEPDecomposition core_ep_decompose(const ComplexMatrix& a, const ToleranceModel& tol) {
  if (!a.is_square()) throw ShapeError("core_ep_decompose: expected a square matrix");
  CoreEPDecomposition d;
  d.index = matrix_index(a, tol).index;
  const ComplexMatrix ak = power(a, d.index);
  const Index r = power_rank(a, ak, d.index, tol);

  d.u = qr_column_pivoted(ak).q;
  const ComplexMatrix u1 = leading_columns(d.u, r);
  const ComplexMatrix u2 = trailing_columns(d.u, r);
  const ComplexMatrix u1h = conjugate_transpose(u1);
  const ComplexMatrix u2h = conjugate_transpose(u2);
  d.t = u1h * a * u1;
  d.s = u1h * a * u2;
  d.nil = u2h * a * u2;
  d.partition_residual = relative_norm(u2h * a * u1, a);

  d.unitarity_residual = unitarity_defect(d.u);
  d.reconstruction_residual = frobenius_norm(d.reconstruct() - a) / std::max(1.0, frobenius_norm(a));
  d.nilpotency_residual = nilpotency_defect(d.nil, d.index, spectral_norm(a));
  d.t_sigma_min = smallest_singular_value(d.t);
  return d;
}

WeightedCoreEPDecomposition weighted_core_ep_decompose(const WeightedPair& p, const ToleranceModel& tol) {
  const Index m = p.rows();
  const Index n = p.cols();
  const Index k = p.k();
  const ComplexMatrix awk = power(p.aw(), k);
  const ComplexMatrix wak = power(p.wa(), k);
  const Index t = power_rank(p.aw(), awk, k, tol);
  const Index t_wa = power_rank(p.wa(), wak, k, tol);
  if (t != t_wa) {
    throw DecompositionError("weighted core-EP: rank((AW)^k) = " + std::to_string(t) + " but rank((WA)^k) = " +
                             std::to_string(t_wa));
  }

  WeightedCoreEPDecomposition d;
  d.t_dim = t;
  d.ind_aw = p.ind_aw();
  d.ind_wa = p.ind_wa();
  d.u = qr_column_pivoted(awk).q;
  d.v = qr_column_pivoted(wak).q;

  const ComplexMatrix a_mid = conjugate_transpose(d.u) * p.a() * d.v;  // m x n
  const ComplexMatrix w_mid = conjugate_transpose(d.v) * p.w() * d.u;  // n x m
  d.a1 = block(a_mid, 0, 0, t, t);
  d.a2 = block(a_mid, 0, t, t, n - t);
  d.a3 = block(a_mid, t, t, m - t, n - t);
  d.w1 = block(w_mid, 0, 0, t, t);
  d.w2 = block(w_mid, 0, t, t, m - t);
  d.w3 = block(w_mid, t, t, n - t, m - t);
  d.partition_residual = std::max(relative_norm(block(a_mid, t, 0, m - t, t), p.a()),
                                  relative_norm(block(w_mid, t, 0, n - t, t), p.w()));

  d.unitarity_residual = std::max(unitarity_defect(d.u), unitarity_defect(d.v));
  d.reconstruction_residual =
      std::max(frobenius_norm(d.reconstruct_a() - p.a()) / std::max(1.0, frobenius_norm(p.a())),
               frobenius_norm(d.reconstruct_w() - p.w()) / std::max(1.0, frobenius_norm(p.w())));
  const double scale = spectral_norm(p.a()) * spectral_norm(p.w());
  d.nilpotency_residual = std::max(nilpotency_defect(d.a3 * d.w3, d.ind_aw, scale),
                                   nilpotency_defect(d.w3 * d.a3, d.ind_wa, scale));
  d.a1_sigma_min = smallest_singular_value(d.a1);
  d.w1_sigma_min = smallest_singular_value(d.w1);
  const UnitBlocks unit = unit_blocks(d, tol);
  d.nilpotent_index_aw = matrix_index(unit.d.a3 * unit.d.w3, unit.tol).index;
  d.nilpotent_index_wa = matrix_index(unit.d.w3 * unit.d.a3, unit.tol).index;

  const double atol = tol.residual_atol();
  std::string failure;
  if (d.unitarity_residual > atol) failure = "unitarity residual";
  else if (d.reconstruction_residual > atol) failure = "reconstruction residual";
  else if (d.nilpotency_residual > atol) failure = "nilpotency residual";
  else if (t > 0 && d.a1_sigma_min <= tol.rank_cutoff(m, n) * spectral_norm(p.a())) failure = "A1 singular";
  else if (t > 0 && d.w1_sigma_min <= tol.rank_cutoff(n, m) * spectral_norm(p.w())) failure = "W1 singular";
  else if (d.nilpotent_index_aw != d.ind_aw || d.nilpotent_index_wa != d.ind_wa) failure = "nilpotency index mismatch";
  if (!failure.empty()) throw DecompositionError("weighted core-EP decomposition invalid: " + failure);
  return d;
}

ComplexMatrix block_pinv(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& a1_in,
                         const ComplexMatrix& a2_in, const ComplexMatrix& a3_in, const ToleranceModel& tol_in) {
  const Index t = a1_in.rows();
  if (!a1_in.is_square()) throw ShapeError("block_pinv: A1 must be square");
  if (a2_in.rows() != t || a3_in.cols() != a2_in.cols() || u.rows() != t + a3_in.rows() ||
      v.rows() != t + a3_in.cols() || !u.is_square() || !v.is_square()) {
    throw ShapeError("block_pinv: blocks do not partition U [[A1, A2], [0, A3]] V*");
  }
  const double alpha = unit_scale(upper_block(a1_in, a2_in, a3_in), tol_in);
  const ComplexMatrix a1 = scale(a1_in, 1.0 / alpha);
  const ComplexMatrix a2 = scale(a2_in, 1.0 / alpha);
  const ComplexMatrix a3 = scale(a3_in, 1.0 / alpha);
  const ToleranceModel tol = tol_in.with_reference_floor(1.0);
  if (rank(a1, tol) < t) throw DomainError("block_pinv: A1 is singular");

  const ComplexMatrix a1h = conjugate_transpose(a1);
  const ComplexMatrix a2h = conjugate_transpose(a2);
  const ComplexMatrix a3p = pinv(a3, tol);
  const ComplexMatrix coupling = ComplexMatrix::identity(a3.cols()) - a3p * a3;  // I - Q_A3
  const ComplexMatrix omega = inverse(a1 * a1h + a2 * coupling * a2h, tol);

  const ComplexMatrix top_left = a1h * omega;
  const ComplexMatrix top_right = -(top_left * a2 * a3p);
  const ComplexMatrix bottom_left = coupling * a2h * omega;
  const ComplexMatrix bottom_right = a3p - bottom_left * a2 * a3p;
  return scale(v * assemble_blocks(top_left, top_right, bottom_left, bottom_right) * conjugate_transpose(u),
               1.0 / alpha);
}

ComplexMatrix block_range_projector(const ComplexMatrix& u, Index t, const ComplexMatrix& a3,
                                    const ToleranceModel& tol, double reference_scale) {
  if (u.rows() != t + a3.rows()) throw ShapeError("block_range_projector: U does not match the partition");
  const ComplexMatrix p3 = a3 * pinv(a3, tol, reference_scale);
  const ComplexMatrix inner = assemble_blocks(ComplexMatrix::identity(t), ComplexMatrix(t, a3.rows()),
                                              ComplexMatrix(a3.rows(), t), p3);
  return u * inner * conjugate_transpose(u);
}

std::pair<ComplexMatrix, CanonicalParts> canonical_weighted_qbt(const WeightedCoreEPDecomposition& d_in,
                                                                QBTParams params, const ToleranceModel& tol_in) {
  const Index q = params.q;
  const UnitBlocks unit = unit_blocks(d_in, tol_in);
  const WeightedCoreEPDecomposition& d = unit.d;
  const ToleranceModel& tol = unit.tol;
  const double alpha = unit.alpha;
  const double omega = unit.omega;
  const ComplexMatrix lead = d.w1 * d.a1 * d.w1;  // W1 A1 W1
  const ComplexMatrix lead_h = conjugate_transpose(lead);
  const ComplexMatrix m_block = d.w1 * d.a1 * d.w2 + d.w1 * d.a2 * d.w3 + d.w2 * d.a3 * d.w3;
  const ComplexMatrix m_h = conjugate_transpose(m_block);

  const ComplexMatrix inner = weighted_qbt_formula(d.a3, d.w3, q, tol);  // A3^{q,W3}
  const ComplexMatrix z = power_projector(d.a3 * d.w3, q, tol) - proj_range(inner, tol);

  CanonicalParts parts{m_block, ComplexMatrix()};
  try {
    parts.omega = inverse(lead * lead_h + m_block * z * m_h, tol);
  } catch (const DomainError&) {
    throw DecompositionError("canonical form: Omega_W is singular; decomposition invariants do not hold");
  }

  const ComplexMatrix b1 = lead_h * parts.omega;
  const ComplexMatrix b2 = -(b1 * m_block * inner);
  const ComplexMatrix b3 = z * m_h * parts.omega;
  const ComplexMatrix b4 = inner - b3 * m_block * inner;
  // Back to the original scale: X ~ 1 / (alpha omega^2), M ~ alpha omega^2,
  // Omega_W ~ (alpha omega^2)^-2.
  const double factor = 1.0 / (alpha * omega * omega);
  ComplexMatrix x = scale(d.u * assemble_blocks(b1, b2, b3, b4) * conjugate_transpose(d.v), factor);
  parts.m_block = scale(parts.m_block, 1.0 / factor);
  parts.omega = scale(parts.omega, factor * factor);
  return {std::move(x), std::move(parts)};
}

std::pair<ComplexMatrix, ComplexMatrix> canonical_qbt_with_delta(const CoreEPDecomposition& d_in,
                                                                 QBTParams params, const ToleranceModel& tol_in) {
  const double alpha = unit_scale(upper_block(d_in.t, d_in.s, d_in.nil), tol_in);
  CoreEPDecomposition d = d_in;
  d.t = scale(d_in.t, 1.0 / alpha);
  d.s = scale(d_in.s, 1.0 / alpha);
  d.nil = scale(d_in.nil, 1.0 / alpha);
  const ToleranceModel tol = block_tolerance(tol_in, d.u.rows(), d.u.rows(), d.partition_residual);
  const ComplexMatrix th = conjugate_transpose(d.t);
  const ComplexMatrix sh = conjugate_transpose(d.s);
  const ComplexMatrix nil_qbt = qbt_inverse(d.nil, params, tol);
  // P_{N^q} rather than P_N: the two agree only for q = 1.
  const ComplexMatrix z = power_projector(d.nil, params.q, tol) - proj_range(nil_qbt, tol);
  ComplexMatrix delta = inverse(d.t * th + d.s * z * sh, tol);

  const ComplexMatrix b1 = th * delta;
  const ComplexMatrix b2 = -(b1 * d.s * nil_qbt);
  const ComplexMatrix b3 = z * sh * delta;
  const ComplexMatrix b4 = nil_qbt - b3 * d.s * nil_qbt;
  ComplexMatrix x = scale(d.u * assemble_blocks(b1, b2, b3, b4) * conjugate_transpose(d.u), 1.0 / alpha);
  // Delta ~ alpha^-2.
  delta = scale(delta, 1.0 / (alpha * alpha));
  return {std::move(x), std::move(delta)};
}

ComplexMatrix canonical_qbt(const CoreEPDecomposition& d, QBTParams params, const ToleranceModel& tol) {
  return canonical_qbt_with_delta(d, params, tol).first;
}

std::pair<ComplexMatrix, ComplexMatrix> canonical_qbt_products(const WeightedCoreEPDecomposition& d_in,
                                                               QBTParams params, const ToleranceModel& tol_in) {
  const UnitBlocks unit = unit_blocks(d_in, tol_in);
  const WeightedCoreEPDecomposition& d = unit.d;
  const ToleranceModel& tol = unit.tol;
  const double factor = 1.0 / (unit.alpha * unit.omega);
  CoreEPDecomposition aw;
  aw.u = d.u;
  aw.t = d.a1 * d.w1;
  aw.s = d.a1 * d.w2 + d.a2 * d.w3;
  aw.nil = d.a3 * d.w3;
  aw.index = d.ind_aw;
  aw.partition_residual = d.partition_residual;

  CoreEPDecomposition wa;
  wa.u = d.v;
  wa.t = d.w1 * d.a1;
  wa.s = d.w1 * d.a2 + d.w2 * d.a3;
  wa.nil = d.w3 * d.a3;
  wa.index = d.ind_wa;
  wa.partition_residual = d.partition_residual;

  return {scale(canonical_qbt(aw, params, tol), factor), scale(canonical_qbt(wa, params, tol), factor)};
}

namespace detail {

std::pair<ComplexMatrix, ComplexMatrix> trailing_projector_forms(const WeightedCoreEPDecomposition& d_in, Index q,
                                                                 const ToleranceModel& tol_in) {
  const UnitBlocks unit = unit_blocks(d_in, tol_in);
  const WeightedCoreEPDecomposition& d = unit.d;
  const ToleranceModel& tol = unit.tol;
  const ComplexMatrix p = power_projector(d.a3 * d.w3, q, tol);
  const ComplexMatrix b = d.w3 * d.a3 * d.w3 * p;
  const ComplexMatrix complement = ComplexMatrix::identity(p.rows()) - proj_corange(b, tol);
  const ComplexMatrix inner = weighted_qbt_formula(d.a3, d.w3, q, tol);
  return {p * complement * p, p - proj_range(inner, tol)};
}

}  // namespace detail

}  // namespace geninv
