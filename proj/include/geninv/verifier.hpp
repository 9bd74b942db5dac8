#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geninv/matrix.hpp"
#include "geninv/weighted.hpp"

namespace geninv {

/// One named measurement. Upper-bound residuals pass when value <= threshold;
/// lower-bound ones (expected inequalities) pass when value >= threshold.
struct Residual {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool lower_bound = false;

  bool ok() const { return lower_bound ? value >= threshold : value <= threshold; }
};

struct CheckResult {
  std::string check_id;
  bool passed = false;
  std::vector<Residual> residuals;
  std::string detail;

  /// Largest value recorded under `name`, or -1 when absent.
  double residual(const std::string& name) const;
};

struct ConformanceReport {
  std::vector<CheckResult> results;
  std::uint64_t corpus_seed = 0;
  ToleranceModel tolerance;

  bool all_passed() const;
  const CheckResult* find(const std::string& check_id) const;
};

/// Ids of the checks run_random_corpus registers, one per identity of the
/// weighted inverses and the decompositions.
const std::vector<std::string>& corpus_check_manifest();

/// Ids of the checks run_paper_examples registers.
const std::vector<std::string>& paper_check_manifest();

/// Evaluates the paper's displayed matrices on the float and exact paths.
/// Float comparisons use 1e-10 relative Frobenius error; exact ones equality.
ConformanceReport run_paper_examples();

/// One CheckResult per characterizing system (the defining three-equation
/// system and systems 1-3), for the candidate X = weighted_qbt(p, q).
std::vector<CheckResult> run_system_checks(const WeightedPair& p, Index q, const ToleranceModel& tol = {});

/// Same checks for an arbitrary candidate X (shape m x n).
std::vector<CheckResult> run_system_checks(const WeightedPair& p, Index q, const ComplexMatrix& x,
                                           const ToleranceModel& tol = {});

/// Range and null-space relations of X = weighted_qbt(p, q): the
/// properties_bt.* and prop1.* checks of the corpus, for one pair.
std::vector<CheckResult> run_range_null_checks(const WeightedPair& p, Index q, const ToleranceModel& tol = {});

/// q = 0 -> (WAW)^+, q = 1 -> A^{BT,W}, q = Ind(AW) and every q in [k, k + 2]
/// -> A^{core-EP,W}.
std::vector<CheckResult> run_reduction_checks(const WeightedPair& p, const ToleranceModel& tol = {});

/// Planted corpus run through every registered identity; one aggregated
/// CheckResult per manifest id, holding the worst residuals over the corpus.
/// tol.residual_atol is the pass threshold of the equation checks.
ConformanceReport run_random_corpus(std::uint64_t seed, Index count, Index max_dim, const ToleranceModel& tol = {});

/// Concatenation of two reports (seed and tolerance taken from `corpus`).
ConformanceReport merge_reports(const ConformanceReport& paper, const ConformanceReport& corpus);

/// Line-oriented text: "PASS|FAIL <id> name=value(<=|>=threshold) ... [detail]".
std::string to_text(const ConformanceReport& report);

/// {"corpus_seed", "tolerance", "passed", "results": [{check_id, passed, residuals, detail}]}.
std::string to_json(const ConformanceReport& report);

}  // namespace geninv
