#include "geninv/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "geninv/corpus.hpp"
#include "geninv/decompositions.hpp"
#include "geninv/exact.hpp"

namespace geninv {

namespace {

constexpr double kPaperTol = 1e-10;
constexpr double kGapFloor = 1e-3;
constexpr double kPerturbation = 1e-3;

class Check {
 public:
  explicit Check(std::string id) { result_.check_id = std::move(id); }

  Check& upper(std::string name, double value, double threshold) {
    result_.residuals.push_back({std::move(name), value, threshold, false});
    return *this;
  }
  Check& lower(std::string name, double value, double threshold) {
    result_.residuals.push_back({std::move(name), value, threshold, true});
    return *this;
  }
  // Boolean facts are recorded as 0 (holds) / 1 (fails) against threshold 0.
  Check& holds(std::string name, bool ok) { return upper(std::move(name), ok ? 0.0 : 1.0, 0.0); }
  Check& note(const std::string& text) {
    if (!result_.detail.empty()) result_.detail += "; ";
    result_.detail += text;
    return *this;
  }

  CheckResult finish() {
    result_.passed = std::all_of(result_.residuals.begin(), result_.residuals.end(),
                                 [](const Residual& r) { return r.ok(); });
    return std::move(result_);
  }

 private:
  CheckResult result_;
};

// A check whose body threw is a failure carrying the message.
CheckResult guarded(const std::string& id, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    CheckResult r;
    r.check_id = id;
    r.passed = false;
    r.residuals.push_back({"exception", 1.0, 0.0, false});
    r.detail = e.what();
    return r;
  }
}

double eq(const ComplexMatrix& lhs, const ComplexMatrix& rhs) { return relative_distance(lhs, rhs); }

// Projectors onto generator spaces use the rank predicates' cutoff, so that a
// residual and the matching predicate agree on which directions Y spans.
ToleranceModel generator_tolerance(const ComplexMatrix& y, const ToleranceModel& tol) {
  return tol.with_rank_rtol(std::max(tol.rank_cutoff(y.rows(), y.cols()), tol.residual_atol()));
}

// ||X - P_Y X|| / ||X||: how far R(X) sticks out of R(Y).
double range_excess(const ComplexMatrix& x, const ComplexMatrix& y, const ToleranceModel& tol) {
  const double nx = frobenius_norm(x);
  if (nx == 0.0) return 0.0;
  return frobenius_norm(x - proj_range(y, generator_tolerance(y, tol)) * x) / nx;
}

// ||X - X Q_Y|| / ||X||: how far N(Y) fails to lie in N(X).
double null_excess(const ComplexMatrix& y, const ComplexMatrix& x, const ToleranceModel& tol) {
  const double nx = frobenius_norm(x);
  if (nx == 0.0) return 0.0;
  return frobenius_norm(x - x * proj_corange(y, generator_tolerance(y, tol))) / nx;
}

void range_equality(Check& c, const std::string& name, const ComplexMatrix& x, const ComplexMatrix& y,
                    const ToleranceModel& tol) {
  c.holds(name + ".rank", range_equal(x, y, tol));
  c.upper(name + ".residual", std::max(range_excess(x, y, tol), range_excess(y, x, tol)), tol.residual_atol());
}

void null_equality(Check& c, const std::string& name, const ComplexMatrix& x, const ComplexMatrix& y,
                   const ToleranceModel& tol) {
  c.holds(name + ".rank", nullspace_equal(x, y, tol));
  c.upper(name + ".residual", std::max(null_excess(x, y, tol), null_excess(y, x, tol)), tol.residual_atol());
}

ComplexMatrix adj(const ComplexMatrix& a) { return conjugate_transpose(a); }

// A computed product with the singular values at the rounding-noise level of
// its factors removed; `reference` is the product of the factors' norms. A
// product that vanishes in exact arithmetic comes back exactly zero, so that
// the range and null-space predicates (which normalize) see it as zero.
ComplexMatrix significant(const ComplexMatrix& m, double reference, const ToleranceModel& tol) {
  constexpr double kNoiseSafety = 100.0;
  if (m.empty()) return m;
  const SVDResult d = svd(m);
  const double cutoff =
      kNoiseSafety * tol.rank_cutoff(m.rows(), m.cols()) * std::max(d.singular_values.front(), reference);
  DenseMatrix out = DenseMatrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < d.singular_values.size(); ++i) {
    const double sigma = d.singular_values[i];
    if (sigma <= cutoff) break;
    const auto col = static_cast<Index>(i);
    out.noalias() += sigma * d.u.dense().col(col) * d.v.dense().col(col).adjoint();
  }
  return ComplexMatrix(std::move(out));
}

// Generators of the subspaces the range/null-space checks compare X against, each cleaned of
// factor-level noise.
struct Generators {
  PowerProjection proj;     // P_{(AW)^q}
  ComplexMatrix awq;        // (AW)^q
  ComplexMatrix range_gen;  // P_{(AW)^q} (WAW)*
  // P_{(AW)^{q+1}} W*, whose null space is that of [(AW)^{q+1}]* W* but whose
  // singular values do not spread like those of a matrix power.
  ComplexMatrix null_gen;
  double null_reference = 0.0;
  ComplexMatrix null_gen_raw;  // [(AW)^{q+1}]* W*
  double null_raw_reference = 0.0;
  ComplexMatrix aw_proj;  // AW P_{(AW)^q} = [(AW)^{q-BT}]^+
  double aw_proj_reference = 0.0;
};

Generators generators(const WeightedPair& p, Index q, const ToleranceModel& tol) {
  const ComplexMatrix& aw = p.aw();
  const double aw_norm = spectral_norm(aw);
  const double w_norm = spectral_norm(p.w());
  const double waw_norm = spectral_norm(p.waw());
  Generators g;
  g.proj = power_projection(aw, q, tol);
  g.awq = significant(power(aw, q), power_reference(aw_norm, q, tol), tol);
  g.range_gen = significant(g.proj.projector * adj(p.waw()), waw_norm, tol);
  const PowerProjection next = power_projection(aw, q + 1, tol);
  g.null_reference = w_norm;
  g.null_gen = significant(next.projector * adj(p.w()), g.null_reference, tol);
  g.null_raw_reference = power_reference(aw_norm, q + 1, tol) * w_norm;
  g.null_gen_raw = significant(adj(power(aw, q + 1)) * adj(p.w()), g.null_raw_reference, tol);
  g.aw_proj_reference = aw_norm;
  g.aw_proj = significant(aw * g.proj.projector, g.aw_proj_reference, tol);
  return g;
}

// ---------------------------------------------------------------------------
// Characterizing systems

struct SystemResiduals {
  double def_eq1, def_eq2, def_eq3;
  double s1_projection, s1_range;
  double s2_equation, s2_range;
  double s3_equation, s3_null;
};

SystemResiduals system_residuals(const WeightedPair& p, Index q, const ComplexMatrix& x, const ComplexMatrix& x0,
                                 const ToleranceModel& tol) {
  const ComplexMatrix& aw = p.aw();
  const ComplexMatrix& wa = p.wa();
  const ComplexMatrix& waw = p.waw();
  const Generators g = generators(p, q, tol);

  SystemResiduals r{};
  r.def_eq1 = eq(x * waw * x, x);
  r.def_eq2 = eq(x * wa, x0 * wa);
  r.def_eq3 = eq(aw * x, aw * x0);
  r.s1_projection = eq(g.proj.projector * x, x0);
  r.s1_range = range_excess(x, g.awq, tol);
  r.s2_equation = r.def_eq3;
  r.s2_range = range_excess(x, g.range_gen, tol);
  r.s3_equation = r.def_eq2;
  r.s3_null = null_excess(g.range_gen, x, tol);
  return r;
}

// ---------------------------------------------------------------------------
// Paper examples

RationalScalar frac(long p, long q = 1) { return RationalScalar(mpq_class(p, q)); }

struct ExactPair {
  RationalMatrix a;
  RationalMatrix w;
};

ExactPair paper_pair_small() {
  return {RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}}),
          RationalMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})};
}

ExactPair paper_pair_counterexample() {
  return {RationalMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}}),
          RationalMatrix::from_rows(
              {{1, 0, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 1, 1}, {0, 0, 0, 0, 1}})};
}

// Float value, exact value and displayed value all agree.
CheckResult displayed(const std::string& id, const ComplexMatrix& float_value, const RationalMatrix& exact_value,
                      const RationalMatrix& shown) {
  return Check(id)
      .upper("float_error", eq(float_value, float_of(shown)), kPaperTol)
      .holds("exact_equal", exact_value == shown)
      .finish();
}

// The three matrices are pairwise different on both paths.
CheckResult pairwise_distinct(const std::string& id, const std::vector<ComplexMatrix>& floats,
                              const std::vector<RationalMatrix>& exacts) {
  Check c(id);
  double gap = INFINITY;
  bool exact_distinct = true;
  for (std::size_t i = 0; i < floats.size(); ++i)
    for (std::size_t j = i + 1; j < floats.size(); ++j) {
      gap = std::min(gap, frobenius_norm(floats[i] - floats[j]));
      exact_distinct = exact_distinct && exacts[i] != exacts[j];
    }
  return c.lower("min_gap", gap, kGapFloor).holds("exact_distinct", exact_distinct).finish();
}

RationalMatrix exact_dual_left(const RationalMatrix& a, const RationalMatrix& w, Index q) {
  const RationalMatrix s = exact_qbt(a * w, q);
  return s * s * a;
}

RationalMatrix exact_dual_right(const RationalMatrix& a, const RationalMatrix& w, Index q) {
  const RationalMatrix s = exact_qbt(w * a, q);
  return a * s * s;
}

void paper_small_pair(std::vector<CheckResult>& out) {
  const ExactPair e = paper_pair_small();
  const ToleranceModel tol;
  const WeightedPair p(float_of(e.a), float_of(e.w), tol);

  out.push_back(guarded("paper.pair1.indices", [&] {
    const Index ex_aw = exact_index(e.a * e.w);
    const Index ex_wa = exact_index(e.w * e.a);
    return Check("paper.pair1.indices")
        .holds("float_ind_aw_is_3", p.ind_aw() == 3)
        .holds("float_ind_wa_is_2", p.ind_wa() == 2)
        .holds("float_k_is_3", p.k() == 3)
        .holds("exact_ind_aw_is_3", ex_aw == 3)
        .holds("exact_ind_wa_is_2", ex_wa == 2)
        .note("Ind(AW)=" + std::to_string(p.ind_aw()) + " Ind(WA)=" + std::to_string(p.ind_wa()))
        .finish();
  }));

  const RationalMatrix e1 = RationalMatrix::from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  out.push_back(guarded("paper.wcore_ep", [&] {
    return displayed("paper.wcore_ep", weighted_core_ep(p, tol), exact_weighted_qbt(e.a, e.w, 3), e1);
  }));
  out.push_back(guarded("paper.wbt", [&] {
    const RationalMatrix shown =
        RationalMatrix::from_rows({{frac(1, 6), 0, 0}, {frac(1, 6), 0, 0}, {frac(1, 3), 0, 0}, {0, 0, 0}});
    return displayed("paper.wbt", weighted_bt(p, tol), exact_weighted_qbt(e.a, e.w, 1), shown);
  }));
  const RationalMatrix half =
      RationalMatrix::from_rows({{frac(1, 2), 0, 0}, {frac(1, 2), 0, 0}, {0, 0, 0}, {0, 0, 0}});
  out.push_back(guarded("paper.wqbt_q2", [&] {
    return displayed("paper.wqbt_q2", weighted_qbt(p, QBTParams(2), tol), exact_weighted_qbt(e.a, e.w, 2), half);
  }));
  out.push_back(guarded("paper.wqbt_q2_forms", [&] {
    const auto [f1, f2] = weighted_qbt_product_forms(p, QBTParams(2), tol);
    const ComplexMatrix shown = float_of(half);
    const ComplexMatrix sq = weighted_qbt_via_square(p, QBTParams(2), tol);
    return Check("paper.wqbt_q2_forms")
        .upper("product_form_1", eq(f1, shown), kPaperTol)
        .upper("product_form_2", eq(f2, shown), kPaperTol)
        .upper("via_square", eq(sq, shown), kPaperTol)
        .finish();
  }));
  out.push_back(guarded("paper.wqbt_q3", [&] {
    return displayed("paper.wqbt_q3", weighted_qbt(p, QBTParams(3), tol), exact_weighted_qbt(e.a, e.w, 3), e1);
  }));

  struct Dual {
    Index q;
    RationalMatrix left;
    RationalMatrix right;
  };
  const std::vector<Dual> duals = {
      {1, RationalMatrix::from_rows({{0, 0, 0}, {0, 0, 0}, {frac(1, 2), 0, 0}, {0, 0, 0}}),
       RationalMatrix::from_rows({{frac(3, 25), 0, 0}, {frac(2, 25), 0, 0}, {0, 0, 0}, {0, 0, 0}})},
      {2,
       RationalMatrix::from_rows(
           {{frac(1, 4), frac(1, 4), 0}, {frac(1, 4), frac(1, 4), 0}, {0, 0, 0}, {0, 0, 0}}),
       e1},
      {3, RationalMatrix::from_rows({{1, 1, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}), e1},
  };
  for (const Dual& d : duals) {
    const std::string tag = "paper.dual_q" + std::to_string(d.q);
    const DualRepresentation fl = dual_representation_gap(p, QBTParams(d.q), tol);
    const RationalMatrix ex_w = exact_weighted_qbt(e.a, e.w, d.q);
    const RationalMatrix ex_l = exact_dual_left(e.a, e.w, d.q);
    const RationalMatrix ex_r = exact_dual_right(e.a, e.w, d.q);
    out.push_back(guarded(tag + ".left", [&] { return displayed(tag + ".left", fl.left, ex_l, d.left); }));
    out.push_back(guarded(tag + ".right", [&] { return displayed(tag + ".right", fl.right, ex_r, d.right); }));
    if (d.q < 3) {
      out.push_back(guarded(tag + ".distinct", [&] {
        return pairwise_distinct(tag + ".distinct", {fl.weighted, fl.left, fl.right}, {ex_w, ex_l, ex_r});
      }));
    } else {
      out.push_back(guarded(tag + ".right_equals_inverse", [&] {
        return Check(tag + ".right_equals_inverse")
            .upper("float_error", eq(fl.right, fl.weighted), kPaperTol)
            .holds("exact_equal", ex_r == ex_w)
            .finish();
      }));
      out.push_back(guarded(tag + ".left_differs", [&] {
        return pairwise_distinct(tag + ".left_differs", {fl.weighted, fl.left}, {ex_w, ex_l});
      }));
    }
  }

  out.push_back(guarded("paper.pair1.decomposition", [&] {
    const WeightedCoreEPDecomposition d = weighted_core_ep_decompose(p, tol);
    const RationalMatrix awk = power(e.a * e.w, 3);
    return Check("paper.pair1.decomposition")
        .holds("t_is_1", d.t_dim == 1)
        .holds("exact_rank_awk_is_1", exact_rank(awk) == 1)
        .upper("reconstruction", d.reconstruction_residual, kPaperTol)
        .upper("unitarity", d.unitarity_residual, kPaperTol)
        .upper("nilpotency", d.nilpotency_residual, kPaperTol)
        .finish();
  }));

  out.push_back(guarded("paper.pair1.cline_shift", [&] {
    const RationalMatrix lhs = power(e.a * e.w, 3) * e.a;
    const RationalMatrix rhs = e.a * power(e.w * e.a, 3);
    return Check("paper.pair1.cline_shift")
        .holds("float", cline_shift_check(p, 4, tol))
        .holds("exact_equal", lhs == rhs)
        .finish();
  }));
}

void paper_counterexample(std::vector<CheckResult>& out) {
  const ExactPair e = paper_pair_counterexample();
  const ToleranceModel tol;
  const WeightedPair p(float_of(e.a), float_of(e.w), tol);

  out.push_back(guarded("paper.pair2.indices", [&] {
    return Check("paper.pair2.indices")
        .holds("float_ind_aw_is_3", p.ind_aw() == 3)
        .holds("float_ind_wa_is_3", p.ind_wa() == 3)
        .holds("float_k_is_3", p.k() == 3)
        .holds("exact_ind_aw_is_3", exact_index(e.a * e.w) == 3)
        .holds("exact_ind_wa_is_3", exact_index(e.w * e.a) == 3)
        .finish();
  }));

  // X = Q_AW X0 + (I - Q_AW) W*, X0 = A^{BT,W}.
  const RationalMatrix aw = e.a * e.w;
  const RationalMatrix q_aw = exact_pinv(aw) * aw;
  const RationalMatrix x0 = exact_weighted_qbt(e.a, e.w, 1);
  const RationalMatrix x = q_aw * x0 + (RationalMatrix::identity(aw.rows()) - q_aw) * conjugate_transpose(e.w);

  const ComplexMatrix f_aw = p.aw();
  const ComplexMatrix f_q = proj_corange(f_aw, tol);
  const ComplexMatrix f_x0 = weighted_bt(p, tol);
  const ComplexMatrix f_x = f_q * f_x0 + (ComplexMatrix::identity(f_aw.rows()) - f_q) * adj(p.w());

  out.push_back(guarded("paper.example23.equations", [&] {
    return Check("paper.example23.equations")
        .upper("float_eq1", eq(f_x * p.waw() * f_x, f_x), kPaperTol)
        .upper("float_eq3", eq(f_aw * f_x, f_aw * f_x0), kPaperTol)
        .holds("exact_eq1", x * e.w * e.a * e.w * x == x)
        .holds("exact_eq3", aw * x == aw * x0)
        .finish();
  }));

  out.push_back(guarded("paper.example23.second_equation", [&] {
    const RationalMatrix xwa = x * e.w * e.a;
    const RationalMatrix x0wa = x0 * e.w * e.a;
    const RationalMatrix shown_xwa = RationalMatrix::from_rows({{frac(3, 5), frac(3, 5), frac(-1, 5), -1},
                                                                {0, 0, 0, 0},
                                                                {frac(1, 5), frac(1, 5), frac(-2, 5), -1},
                                                                {0, 0, 1, 2},
                                                                {0, 0, 0, 0}});
    const RationalMatrix shown_x0wa = RationalMatrix::from_rows({{frac(1, 3), frac(1, 3), frac(-2, 3), frac(-5, 3)},
                                                                 {frac(1, 3), frac(1, 3), frac(-7, 6), frac(-8, 3)},
                                                                 {frac(1, 3), frac(1, 3), frac(-1, 6), frac(-2, 3)},
                                                                 {0, 0, 1, 2},
                                                                 {0, 0, 0, 0}});
    const ComplexMatrix f_xwa = f_x * p.wa();
    const ComplexMatrix f_x0wa = f_x0 * p.wa();
    return Check("paper.example23.second_equation")
        .lower("float_gap", frobenius_norm(f_xwa - f_x0wa), kGapFloor)
        .upper("float_xwa_error", eq(f_xwa, float_of(shown_xwa)), kPaperTol)
        .upper("float_x0wa_error", eq(f_x0wa, float_of(shown_x0wa)), kPaperTol)
        .holds("exact_xwa_equal", xwa == shown_xwa)
        .holds("exact_x0wa_equal", x0wa == shown_x0wa)
        .holds("exact_entry_3/5", xwa(0, 0) == frac(3, 5))
        .holds("exact_entry_1/3", x0wa(0, 0) == frac(1, 3))
        .note("XWA(1,1)=" + xwa(0, 0).to_string() + " X0WA(1,1)=" + x0wa(0, 0).to_string())
        .finish();
  }));
}

// ---------------------------------------------------------------------------
// Corpus

const std::vector<std::string> kCorpusManifest = {
    "pair.planted_indices",
    "pair.index_gap",
    "cline_shift",
    "wdrazin.defining_system",
    "wdrazin.left_form",
    "wcore_ep.system",
    "wcore_ep.properties",
    "wbt.defining_system",
    "system.definition.eq1",
    "system.definition.eq2",
    "system.definition.eq3",
    "system.1.projection",
    "system.1.range",
    "system.2.equation",
    "system.2.range",
    "system.3.equation",
    "system.3.null",
    "wqbt.uniqueness",
    "reduction.q0",
    "reduction.q1",
    "reduction.ind_aw",
    "reduction.q_ge_k",
    "wqbt.product_forms",
    "wqbt.via_square",
    "properties_bt.ii",
    "properties_bt.iii",
    "properties_bt.iv",
    "properties_bt.v",
    "properties_bt.vi",
    "prop1.i",
    "prop1.ii",
    "prop1.iii",
    "dual_representation.q_ge_k",
    "remark.k1_core",
    "core_ep_decomposition",
    "weighted_core_ep_decomposition",
    "weighted_decomposition.aw_product",
    "block_pinv",
    "block_range_projector",
    "canonical.weighted_qbt",
    "canonical.coincides",
    "canonical.auxiliary_projector",
    "canonical.qbt_square",
    "canonical.qbt_products",
    "exact.agreement",
};

const std::vector<std::string> kPaperManifest = {
    "paper.pair1.indices",        "paper.wcore_ep",
    "paper.wbt",                  "paper.wqbt_q2",
    "paper.wqbt_q2_forms",        "paper.wqbt_q3",
    "paper.dual_q1.left",         "paper.dual_q1.right",
    "paper.dual_q1.distinct",     "paper.dual_q2.left",
    "paper.dual_q2.right",        "paper.dual_q2.distinct",
    "paper.dual_q3.left",         "paper.dual_q3.right",
    "paper.dual_q3.right_equals_inverse", "paper.dual_q3.left_differs",
    "paper.pair1.decomposition",  "paper.pair1.cline_shift",
    "paper.pair2.indices",        "paper.example23.equations",
    "paper.example23.second_equation",
};

ComplexMatrix random_direction(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix d(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) d(i, j) = Complex(normal(rng), normal(rng));
  const double n = d.norm();
  if (n > 0) d /= n;
  return ComplexMatrix(std::move(d));
}

void range_null_checks(const WeightedPair& p, Index q, const ComplexMatrix& x, const ToleranceModel& tol,
                       std::vector<CheckResult>& out) {
  const std::string qs = "q" + std::to_string(q);
  const ComplexMatrix& aw = p.aw();
  const ComplexMatrix& w = p.w();
  const ComplexMatrix& waw = p.waw();
  const Generators gens = generators(p, q, tol);
  const ComplexMatrix& gen = gens.range_gen;
  const ComplexMatrix& null_gen = gens.null_gen;
  const double atol = tol.residual_atol();
  const double w_norm = spectral_norm(w);
  const double waw_norm = spectral_norm(waw);
  const double x_norm = spectral_norm(x);

  out.push_back(guarded("properties_bt.ii", [&] {
    Check c("properties_bt.ii");
    range_equality(c, qs + ".range", x, gen, tol);
    null_equality(c, qs + ".null", x, gen, tol);
    return c.finish();
  }));
  out.push_back(guarded("properties_bt.iii", [&] {
    Check c("properties_bt.iii");
    // ([(AW)^{q-BT}]^+)* W*
    const ComplexMatrix g = significant(adj(gens.aw_proj) * adj(w), gens.aw_proj_reference * w_norm, tol);
    range_equality(c, qs + ".range", x, g, tol);
    null_equality(c, qs + ".null", x, g, tol);
    return c.finish();
  }));
  out.push_back(guarded("properties_bt.iv", [&] {
    Check c("properties_bt.iv");
    const double awq_reference = power_reference(spectral_norm(aw), q, tol);
    const ComplexMatrix awq_pinv = pinv(power(aw, q), tol, awq_reference);
    const ComplexMatrix g = significant(adj(awq_pinv) * gens.null_gen_raw,
                                        spectral_norm(awq_pinv) * gens.null_raw_reference, tol);
    range_equality(c, qs + ".range", x, g, tol);
    null_equality(c, qs + ".null", x, null_gen, tol);
    return c.finish();
  }));
  out.push_back(guarded("properties_bt.v", [&] {
    return Check("properties_bt.v")
        .holds(qs + ".rank", range_contained(x, gens.awq, tol))
        .upper(qs + ".residual", range_excess(x, gens.awq, tol), atol)
        .finish();
  }));
  out.push_back(guarded("properties_bt.vi", [&] {
    return Check("properties_bt.vi").upper(qs, eq(gens.proj.projector * x, x), atol).finish();
  }));

  out.push_back(guarded("prop1.i", [&] {
    Check c("prop1.i");
    c.holds(qs + ".outer_inverse", outer_inverse_check(waw, x, gen, null_gen, tol));
    c.upper(qs + ".outer_equation", eq(x * waw * x, x), atol);
    range_equality(c, qs + ".range", x, gen, tol);
    null_equality(c, qs + ".null", x, null_gen, tol);
    return c.finish();
  }));
  out.push_back(guarded("prop1.ii", [&] {
    Check c("prop1.ii");
    const ComplexMatrix e = significant(waw * x, waw_norm * x_norm, tol);
    c.upper(qs + ".idempotent", eq(e * e, e), atol);
    const ComplexMatrix g =
        significant(w * gens.aw_proj * adj(waw), w_norm * gens.aw_proj_reference * waw_norm, tol);
    range_equality(c, qs + ".range", e, g, tol);
    null_equality(c, qs + ".null", e, null_gen, tol);
    return c.finish();
  }));
  out.push_back(guarded("prop1.iii", [&] {
    Check c("prop1.iii");
    const ComplexMatrix e = significant(x * waw, x_norm * waw_norm, tol);
    c.upper(qs + ".idempotent", eq(e * e, e), atol);
    range_equality(c, qs + ".range", e, gen, tol);
    null_equality(c, qs + ".null", e, significant(null_gen * waw, gens.null_reference * waw_norm, tol), tol);
    return c.finish();
  }));
}

class PairChecks {
 public:
  PairChecks(const PlantedPair& planted, const ToleranceModel& tol, std::mt19937_64& rng)
      : planted_(planted), tol_(tol), rng_(rng), p_(planted.a, planted.w, tol) {}

  void run(std::vector<CheckResult>& out) {
    const Index k = p_.k();
    out.push_back(guarded("pair.planted_indices", [&] { return planted_indices(); }));
    out.push_back(guarded("pair.index_gap", [&] {
      return Check("pair.index_gap").upper("abs_ind_diff", double(std::llabs(p_.ind_aw() - p_.ind_wa())), 1).finish();
    }));
    out.push_back(guarded("cline_shift", [&] {
      Check c("cline_shift");
      for (Index ell = 1; ell <= k + 2; ++ell)
        c.upper("ell_" + std::to_string(ell),
                eq(power(p_.aw(), ell - 1) * p_.a(), p_.a() * power(p_.wa(), ell - 1)), tol_.residual_atol());
      return c.finish();
    }));
    out.push_back(guarded("wdrazin.defining_system", [&] { return wdrazin_system(); }));
    out.push_back(guarded("wdrazin.left_form", [&] {
      const ComplexMatrix d = drazin(p_.aw(), tol_);
      return Check("wdrazin.left_form").upper("equation", eq(d * d * p_.a(), weighted_drazin(p_, tol_)),
                                              tol_.residual_atol()).finish();
    }));
    out.push_back(guarded("wcore_ep.system", [&] { return wcore_ep_system(); }));
    out.push_back(guarded("wcore_ep.properties", [&] { return wcore_ep_properties(); }));
    out.push_back(guarded("wbt.defining_system", [&] { return wbt_system(); }));
    for (CheckResult& r : run_reduction_checks(p_, tol_)) out.push_back(std::move(r));
    out.push_back(guarded("remark.k1_core", [&] {
      Check c("remark.k1_core");
      if (k != 1) return c.note("vacuous: k != 1").finish();
      return c.upper("bt_vs_core_ep", eq(weighted_bt(p_, tol_), weighted_core_ep(p_, tol_)), tol_.residual_atol())
          .finish();
    }));

    decomposition_checks(out);

    for (Index q = 0; q <= k + 1; ++q) per_q(q, out);

    out.push_back(guarded("exact.agreement", [&] { return exact_agreement(); }));
  }

 private:
  // Block routines fed decomposition blocks resolve ranks no finer than the
  // noise in the partition itself.
  ToleranceModel decomposition_tolerance(const WeightedCoreEPDecomposition& d) const {
    const double floor = 10.0 * d.partition_residual;
    return tol_.with_rank_rtol(std::max(tol_.rank_cutoff(d.rows(), d.cols()), floor));
  }

  CheckResult planted_indices() {
    return Check("pair.planted_indices")
        .holds("ind_aw", p_.ind_aw() == planted_.ind_aw)
        .holds("ind_wa", p_.ind_wa() == planted_.ind_wa)
        .holds("k", p_.k() == planted_.k)
        .holds("rank_awk", rank(power(p_.aw(), p_.k()), tol_, power_reference(spectral_norm(p_.aw()), p_.k(), tol_)) == planted_.t)
        .note("planted (" + std::to_string(planted_.ind_aw) + "," + std::to_string(planted_.ind_wa) +
              ") measured (" + std::to_string(p_.ind_aw()) + "," + std::to_string(p_.ind_wa()) + ")")
        .finish();
  }

  CheckResult wdrazin_system() {
    const ComplexMatrix x = weighted_drazin(p_, tol_);
    const ComplexMatrix& w = p_.w();
    const Index k = p_.k();
    return Check("wdrazin.defining_system")
        .upper("eq1", eq(x * p_.waw() * x, x), tol_.residual_atol())
        .upper("eq2", eq(p_.aw() * x, x * p_.wa()), tol_.residual_atol())
        .upper("eq3", eq(x * w * power(p_.aw(), k + 1), power(p_.aw(), k)), tol_.residual_atol())
        .finish();
  }

  CheckResult wcore_ep_system() {
    const ComplexMatrix x = weighted_core_ep(p_, tol_);
    const Index k = p_.k();
    return Check("wcore_ep.system")
        .upper("equation", eq(p_.waw() * x, power_projector(p_.wa(), k, tol_)), tol_.residual_atol())
        .upper("range", range_excess(x, power(p_.aw(), k), tol_), tol_.residual_atol())
        .holds("range.rank", range_contained(x, power(p_.aw(), k), tol_))
        .finish();
  }

  CheckResult wcore_ep_properties() {
    const ComplexMatrix x = weighted_core_ep(p_, tol_);
    const Index k = p_.k();
    const ComplexMatrix wa_cep = core_ep(p_.wa(), tol_);
    const ComplexMatrix aw_cep = core_ep(p_.aw(), tol_);
    return Check("wcore_ep.properties")
        .upper("right_square_form", eq(p_.a() * wa_cep * wa_cep, x), tol_.residual_atol())
        .upper("aw_core_ep", eq(x * p_.w() * power_projector(p_.aw(), k, tol_), aw_cep), tol_.residual_atol())
        .upper("wa_core_ep", eq(power_projector(p_.wa(), k, tol_) * p_.w() * x, wa_cep), tol_.residual_atol())
        .finish();
  }

  CheckResult wbt_system() {
    const ComplexMatrix x = weighted_bt(p_, tol_);
    // [W (AW)^2 (AW)^+]^+ and [(WA)^2 W (AW)^+]^+ are the q = 1 product forms.
    const auto [left, right] = weighted_qbt_product_forms(p_, QBTParams(1), tol_);
    return Check("wbt.defining_system")
        .upper("eq1", eq(x * p_.waw() * x, x), tol_.residual_atol())
        .upper("eq2", eq(x * p_.wa(), left * p_.wa()), tol_.residual_atol())
        .upper("eq3", eq(p_.aw() * x, p_.aw() * right), tol_.residual_atol())
        .finish();
  }

  void decomposition_checks(std::vector<CheckResult>& out) {
    const double atol = tol_.residual_atol();
    out.push_back(guarded("core_ep_decomposition", [&] {
      Check c("core_ep_decomposition");
      for (const auto& [name, m] : {std::pair<std::string, const ComplexMatrix*>{"aw", &p_.aw()}, {"wa", &p_.wa()}}) {
        const CoreEPDecomposition d = core_ep_decompose(*m, tol_);
        c.upper(name + ".unitarity", d.unitarity_residual, atol)
            .upper(name + ".reconstruction", d.reconstruction_residual, atol)
            .upper(name + ".nilpotency", d.nilpotency_residual, atol)
            .holds(name + ".t_nonsingular", d.rank() == 0 || d.t_sigma_min > 0.0);
      }
      return c.finish();
    }));

    bool have_decomposition = false;
    out.push_back(guarded("weighted_core_ep_decomposition", [&] {
      decomposition_ = weighted_core_ep_decompose(p_, tol_);
      have_decomposition = true;
      const WeightedCoreEPDecomposition& d = decomposition_;
      return Check("weighted_core_ep_decomposition")
          .upper("unitarity", d.unitarity_residual, atol)
          .upper("reconstruction", d.reconstruction_residual, atol)
          .upper("nilpotency", d.nilpotency_residual, atol)
          .holds("a1_nonsingular", d.t_dim == 0 || d.a1_sigma_min > 0.0)
          .holds("w1_nonsingular", d.t_dim == 0 || d.w1_sigma_min > 0.0)
          .holds("index_aw_matches", d.nilpotent_index_aw <= p_.ind_aw() && d.ind_aw == p_.ind_aw())
          .holds("index_wa_matches", d.nilpotent_index_wa <= p_.ind_wa() && d.ind_wa == p_.ind_wa())
          .holds("t_matches_planted", d.t_dim == planted_.t)
          .note("t=" + std::to_string(d.t_dim))
          .finish();
    }));

    const auto need = [&](const std::string& id) {
      if (!have_decomposition) throw DecompositionError(id + ": no valid weighted core-EP decomposition");
    };

    out.push_back(guarded("weighted_decomposition.aw_product", [&] {
      need("weighted_decomposition.aw_product");
      const WeightedCoreEPDecomposition& d = decomposition_;
      const ComplexMatrix blocks = assemble_blocks(d.a1 * d.w1, d.a1 * d.w2 + d.a2 * d.w3,
                                                   ComplexMatrix(d.a3.rows(), d.t_dim), d.a3 * d.w3);
      return Check("weighted_decomposition.aw_product")
          .upper("equation", eq(d.u * blocks * adj(d.u), p_.aw()), atol)
          .finish();
    }));

    out.push_back(guarded("block_pinv", [&] {
      need("block_pinv");
      const WeightedCoreEPDecomposition& d = decomposition_;
      Check c("block_pinv");
      if (d.t_dim > 0)
        c.upper("decomposition", eq(block_pinv(d.u, d.v, d.a1, d.a2, d.a3, decomposition_tolerance(d)), pinv(p_.a(), tol_)), atol);
      // Two generic block-triangular samples per pair.
      for (int s = 0; s < 2; ++s) {
        const Index m = std::uniform_int_distribution<Index>(1, 6)(rng_);
        const Index n = std::uniform_int_distribution<Index>(1, 6)(rng_);
        const Index t = std::uniform_int_distribution<Index>(1, std::min(m, n))(rng_);
        const BlockTriangularSample b = random_block_triangular(m, n, t, rng_);
        c.upper("random_" + std::to_string(s), eq(block_pinv(b.u, b.v, b.a1, b.a2, b.a3, tol_), pinv(b.matrix, tol_)),
                atol);
      }
      return c.finish();
    }));

    out.push_back(guarded("block_range_projector", [&] {
      need("block_range_projector");
      const WeightedCoreEPDecomposition& d = decomposition_;
      return Check("block_range_projector")
          .upper("equation", eq(block_range_projector(d.u, d.t_dim, d.a3, decomposition_tolerance(d), spectral_norm(p_.a())),
                 proj_range(p_.a(), tol_)), atol)
          .finish();
    }));

    out.push_back(guarded("canonical.coincides", [&] {
      need("canonical.coincides");
      const WeightedCoreEPDecomposition& d = decomposition_;
      Check c("canonical.coincides");
      c.upper("q1_vs_wbt", eq(canonical_weighted_qbt(d, QBTParams(1), tol_).first, weighted_bt(p_, tol_)), atol);
      const Index m = d.rows();
      const Index n = d.cols();
      ComplexMatrix lead(0, 0);
      if (d.t_dim > 0) lead = inverse(d.w1 * d.a1 * d.w1, tol_);
      const ComplexMatrix blocks =
          assemble_blocks(lead, ComplexMatrix(d.t_dim, n - d.t_dim), ComplexMatrix(m - d.t_dim, d.t_dim),
                          ComplexMatrix(m - d.t_dim, n - d.t_dim));
      c.upper("core_ep_block_form", eq(d.u * blocks * adj(d.v), weighted_core_ep(p_, tol_)), atol);
      return c.finish();
    }));

    have_decomposition_ = have_decomposition;
  }

  void per_q(Index q, std::vector<CheckResult>& out) {
    const QBTParams params(q);
    const double atol = tol_.residual_atol();
    const ComplexMatrix x0 = weighted_qbt(p_, params, tol_);
    const std::string qs = "q" + std::to_string(q);

    // Systems on an independently computed candidate.
    const ComplexMatrix candidate = weighted_qbt_via_square(p_, params, tol_);
    for (CheckResult& r : run_system_checks(p_, q, candidate, tol_)) out.push_back(std::move(r));

    out.push_back(guarded("wqbt.uniqueness", [&] {
      const ComplexMatrix direction = random_direction(x0.rows(), x0.cols(), rng_);
      const ComplexMatrix x = x0 + scale(direction, kPerturbation * std::max(1.0, frobenius_norm(x0)));
      const SystemResiduals r = system_residuals(p_, q, x, x0, tol_);
      return Check("wqbt.uniqueness")
          .lower(qs + ".definition", std::max({r.def_eq1, r.def_eq2, r.def_eq3}), atol)
          .lower(qs + ".system1", std::max(r.s1_projection, r.s1_range), atol)
          .lower(qs + ".system2", std::max(r.s2_equation, r.s2_range), atol)
          .lower(qs + ".system3", std::max(r.s3_equation, r.s3_null), atol)
          .finish();
    }));

    out.push_back(guarded("wqbt.product_forms", [&] {
      const auto [f1, f2] = weighted_qbt_product_forms(p_, params, tol_);
      return Check("wqbt.product_forms")
          .upper(qs + ".form1", eq(f1, x0), atol)
          .upper(qs + ".form2", eq(f2, x0), atol)
          .upper(qs + ".form1_vs_form2", eq(f1, f2), atol)
          .finish();
    }));
    out.push_back(guarded("wqbt.via_square", [&] {
      return Check("wqbt.via_square").upper(qs, eq(candidate, x0), atol).finish();
    }));

    range_null_checks(q, x0, out);

    out.push_back(guarded("dual_representation.q_ge_k", [&] {
      Check c("dual_representation.q_ge_k");
      if (q < p_.k()) return c.note("vacuous below k").finish();
      const DualRepresentation d = dual_representation_gap(p_, params, tol_);
      return c.upper(qs + ".right_form", eq(d.right, x0), atol).finish();
    }));

    out.push_back(guarded("canonical.weighted_qbt", [&] {
      if (!have_decomposition_) throw DecompositionError("no valid weighted core-EP decomposition");
      const auto [x, parts] = canonical_weighted_qbt(decomposition_, params, tol_);
      const WeightedCoreEPDecomposition& d = decomposition_;
      const ComplexMatrix m_expected = d.w1 * d.a1 * d.w2 + d.w1 * d.a2 * d.w3 + d.w2 * d.a3 * d.w3;
      return Check("canonical.weighted_qbt")
          .upper(qs + ".vs_direct", eq(x, x0), atol)
          .upper(qs + ".m_block", eq(parts.m_block, m_expected), atol)
          .finish();
    }));
    out.push_back(guarded("canonical.auxiliary_projector", [&] {
      if (!have_decomposition_) throw DecompositionError("no valid weighted core-EP decomposition");
      const auto [z1, z2] = detail::trailing_projector_forms(decomposition_, q, tol_);
      return Check("canonical.auxiliary_projector").upper(qs, eq(z1, z2), atol).finish();
    }));
    out.push_back(guarded("canonical.qbt_square", [&] {
      Check c("canonical.qbt_square");
      c.upper(qs + ".aw", eq(canonical_qbt(core_ep_decompose(p_.aw(), tol_), params, tol_),
                             qbt_inverse(p_.aw(), params, tol_)), atol);
      c.upper(qs + ".wa", eq(canonical_qbt(core_ep_decompose(p_.wa(), tol_), params, tol_),
                             qbt_inverse(p_.wa(), params, tol_)), atol);
      return c.finish();
    }));
    out.push_back(guarded("canonical.qbt_products", [&] {
      if (!have_decomposition_) throw DecompositionError("no valid weighted core-EP decomposition");
      const auto [aw_form, wa_form] = canonical_qbt_products(decomposition_, params, tol_);
      return Check("canonical.qbt_products")
          .upper(qs + ".aw", eq(aw_form, qbt_inverse(p_.aw(), params, tol_)), atol)
          .upper(qs + ".wa", eq(wa_form, qbt_inverse(p_.wa(), params, tol_)), atol)
          .finish();
    }));
  }

  void range_null_checks(Index q, const ComplexMatrix& x, std::vector<CheckResult>& out) {
    geninv::range_null_checks(p_, q, x, tol_, out);
  }

  CheckResult exact_agreement() {
    Check c("exact.agreement");
    if (!planted_.exact_a) return c.note("vacuous: float member").finish();
    const RationalMatrix& a = *planted_.exact_a;
    const RationalMatrix& w = *planted_.exact_w;
    if (std::max({a.rows(), a.cols()}) > kExactSizeGuard) return c.note("vacuous: above exact size guard").finish();
    const double atol = tol_.residual_atol();
    c.holds("ind_aw", exact_index(a * w) == p_.ind_aw());
    c.holds("ind_wa", exact_index(w * a) == p_.ind_wa());
    c.upper("input_a", eq(float_of(a), p_.a()), 0.0);
    c.upper("input_w", eq(float_of(w), p_.w()), 0.0);
    for (Index q = 0; q <= p_.k() + 1; ++q)
      c.upper("wqbt_q" + std::to_string(q),
              eq(weighted_qbt(p_, QBTParams(q), tol_), float_of(exact_weighted_qbt(a, w, q))), atol);
    c.upper("wdrazin", eq(weighted_drazin(p_, tol_), float_of(exact_weighted_drazin(a, w))), atol);
    c.upper("pinv_a", eq(pinv(p_.a(), tol_), float_of(exact_pinv(a))), atol);
    return c.finish();
  }

  const PlantedPair& planted_;
  ToleranceModel tol_;
  std::mt19937_64& rng_;
  WeightedPair p_;
  WeightedCoreEPDecomposition decomposition_;
  bool have_decomposition_ = false;
};

// Folds per-instance results into one CheckResult per id: worst value per
// residual name, failure count and the first failing instance in the detail.
std::vector<CheckResult> aggregate(const std::vector<std::string>& manifest,
                                   const std::vector<std::pair<std::string, CheckResult>>& instances) {
  struct Acc {
    CheckResult result;
    std::map<std::string, std::size_t> slot;
    int count = 0;
    int failures = 0;
    std::vector<std::string> vacuous;
  };
  std::map<std::string, Acc> acc;
  for (const auto& id : manifest) {
    acc[id].result.check_id = id;
    acc[id].result.passed = true;
  }
  for (const auto& [where, r] : instances) {
    auto it = acc.find(r.check_id);
    if (it == acc.end()) {
      // Unregistered id: surface it as a failure instead of dropping it.
      it = acc.emplace(r.check_id, Acc{}).first;
      it->second.result.check_id = r.check_id;
      it->second.result.detail = "not in manifest";
      it->second.failures = 1;
    }
    Acc& a = it->second;
    ++a.count;
    for (const Residual& res : r.residuals) {
      auto [s, inserted] = a.slot.emplace(res.name, a.result.residuals.size());
      if (inserted) {
        a.result.residuals.push_back(res);
        continue;
      }
      Residual& cur = a.result.residuals[s->second];
      cur.value = res.lower_bound ? std::min(cur.value, res.value) : std::max(cur.value, res.value);
    }
    if (!r.passed) {
      if (a.failures == 0) a.result.detail = "first failure at " + where + (r.detail.empty() ? "" : ": " + r.detail);
      ++a.failures;
    }
  }
  std::vector<CheckResult> out;
  out.reserve(acc.size());
  for (const auto& id : manifest) {
    Acc& a = acc[id];
    a.result.passed = a.failures == 0 && a.count > 0;
    std::string summary = std::to_string(a.count) + " instances, " + std::to_string(a.failures) + " failed";
    a.result.detail = a.result.detail.empty() ? summary : summary + "; " + a.result.detail;
    out.push_back(std::move(a.result));
    acc.erase(id);
  }
  for (auto& [id, a] : acc) {
    a.result.passed = false;
    out.push_back(std::move(a.result));
  }
  return out;
}

}  // namespace

double CheckResult::residual(const std::string& name) const {
  double best = -1.0;
  for (const Residual& r : residuals)
    if (r.name == name) best = std::max(best, r.value);
  return best;
}

bool ConformanceReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

const CheckResult* ConformanceReport::find(const std::string& check_id) const {
  for (const CheckResult& r : results)
    if (r.check_id == check_id) return &r;
  return nullptr;
}

const std::vector<std::string>& corpus_check_manifest() { return kCorpusManifest; }
const std::vector<std::string>& paper_check_manifest() { return kPaperManifest; }

ConformanceReport run_paper_examples() {
  ConformanceReport report;
  report.tolerance = ToleranceModel{};
  paper_small_pair(report.results);
  paper_counterexample(report.results);
  return report;
}

std::vector<CheckResult> run_system_checks(const WeightedPair& p, Index q, const ToleranceModel& tol) {
  return run_system_checks(p, q, weighted_qbt(p, QBTParams(q), tol), tol);
}

std::vector<CheckResult> run_range_null_checks(const WeightedPair& p, Index q, const ToleranceModel& tol) {
  std::vector<CheckResult> out;
  range_null_checks(p, q, weighted_qbt(p, QBTParams(q), tol), tol, out);
  return out;
}

std::vector<CheckResult> run_system_checks(const WeightedPair& p, Index q, const ComplexMatrix& x,
                                           const ToleranceModel& tol) {
  if (q < 0) throw DomainError("q must be nonnegative");
  if (x.rows() != p.rows() || x.cols() != p.cols()) throw ShapeError("candidate must have the shape of A");
  const ComplexMatrix x0 = weighted_qbt(p, QBTParams(q), tol);
  const SystemResiduals r = system_residuals(p, q, x, x0, tol);
  const double atol = tol.residual_atol();
  const std::string qs = "q" + std::to_string(q);
  const auto one = [&](const std::string& id, double value) { return Check(id).upper(qs, value, atol).finish(); };
  return {
      one("system.definition.eq1", r.def_eq1), one("system.definition.eq2", r.def_eq2),
      one("system.definition.eq3", r.def_eq3), one("system.1.projection", r.s1_projection),
      one("system.1.range", r.s1_range),       one("system.2.equation", r.s2_equation),
      one("system.2.range", r.s2_range),       one("system.3.equation", r.s3_equation),
      one("system.3.null", r.s3_null),
  };
}

std::vector<CheckResult> run_reduction_checks(const WeightedPair& p, const ToleranceModel& tol) {
  const double atol = tol.residual_atol();
  const Index k = p.k();
  const ComplexMatrix cep = weighted_core_ep(p, tol);
  std::vector<CheckResult> out;
  out.push_back(guarded("reduction.q0", [&] {
    return Check("reduction.q0").upper("equation", eq(weighted_qbt(p, QBTParams(0), tol), pinv(p.waw(), tol)), atol)
        .finish();
  }));
  out.push_back(guarded("reduction.q1", [&] {
    return Check("reduction.q1").upper("equation", eq(weighted_qbt(p, QBTParams(1), tol), weighted_bt(p, tol)), atol)
        .finish();
  }));
  out.push_back(guarded("reduction.ind_aw", [&] {
    return Check("reduction.ind_aw")
        .upper("equation", eq(weighted_qbt(p, QBTParams(p.ind_aw()), tol), cep), atol)
        .finish();
  }));
  out.push_back(guarded("reduction.q_ge_k", [&] {
    Check c("reduction.q_ge_k");
    for (Index q = k; q <= k + 2; ++q)
      c.upper("q_k+" + std::to_string(q - k), eq(weighted_qbt(p, QBTParams(q), tol), cep), atol);
    return c.finish();
  }));
  return out;
}

ConformanceReport run_random_corpus(std::uint64_t seed, Index count, Index max_dim, const ToleranceModel& tol) {
  const std::vector<PlantedPair> corpus = generate_corpus(seed, count, max_dim);
  // Perturbation directions and block samples come from a stream separate
  // from the one that drew the corpus.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<std::string, CheckResult>> instances;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<CheckResult> results;
    const std::string where = "pair " + std::to_string(i);
    try {
      PairChecks(corpus[i], tol, rng).run(results);
    } catch (const std::exception& e) {
      CheckResult r;
      r.check_id = "pair.planted_indices";
      r.residuals.push_back({"exception", 1.0, 0.0, false});
      r.detail = e.what();
      results.push_back(std::move(r));
    }
    for (CheckResult& r : results) instances.emplace_back(where, std::move(r));
  }
  ConformanceReport report;
  report.corpus_seed = seed;
  report.tolerance = tol;
  report.results = aggregate(kCorpusManifest, instances);
  return report;
}

ConformanceReport merge_reports(const ConformanceReport& paper, const ConformanceReport& corpus) {
  ConformanceReport out = corpus;
  out.results = paper.results;
  out.results.insert(out.results.end(), corpus.results.begin(), corpus.results.end());
  return out;
}

std::string to_text(const ConformanceReport& report) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  for (const CheckResult& r : report.results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.check_id;
    for (const Residual& res : r.residuals)
      os << ' ' << res.name << '=' << res.value << (res.lower_bound ? "(>=" : "(<=") << res.threshold << ')';
    if (!r.detail.empty()) os << " [" << r.detail << ']';
    os << '\n';
  }
  const auto failed = std::count_if(report.results.begin(), report.results.end(),
                                    [](const CheckResult& r) { return !r.passed; });
  os << "# " << report.results.size() << " checks, " << failed << " failed, seed " << report.corpus_seed
     << ", residual_atol " << report.tolerance.residual_atol() << '\n';
  return os.str();
}

std::string to_json(const ConformanceReport& report) {
  nlohmann::json results = nlohmann::json::array();
  for (const CheckResult& r : report.results) {
    nlohmann::json residuals = nlohmann::json::array();
    for (const Residual& res : r.residuals)
      residuals.push_back({{"name", res.name},
                           {"value", res.value},
                           {"threshold", res.threshold},
                           {"bound", res.lower_bound ? "lower" : "upper"}});
    results.push_back({{"check_id", r.check_id}, {"passed", r.passed}, {"residuals", residuals}, {"detail", r.detail}});
  }
  nlohmann::json doc = {
      {"corpus_seed", report.corpus_seed},
      {"tolerance", {{"rank_rtol", report.tolerance.rank_rtol()}, {"residual_atol", report.tolerance.residual_atol()}}},
      {"passed", report.all_passed()},
      {"results", results},
  };
  return doc.dump(2);
}

}  // namespace geninv
