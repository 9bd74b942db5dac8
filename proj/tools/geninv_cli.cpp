// geninv: compute generalized inverses and decompositions of matrices stored
// in CSV or JSON files, or run the conformance checks.
//
// Exit codes: 0 success, 2 usage, 3 parse, 4 domain (including shape
// mismatches), 5 verification failure, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geninv/classical.hpp"
#include "geninv/decompositions.hpp"
#include "geninv/exact.hpp"
#include "geninv/matrix_io.hpp"
#include "geninv/projectors.hpp"
#include "geninv/verifier.hpp"
#include "geninv/weighted.hpp"

namespace {

using namespace geninv;

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kParse = 3, kDomain = 4, kVerification = 5 };

constexpr double kCorpusDefaultTol = 1e-8;

struct Options {
  std::string kind;
  std::string a_path;
  std::string w_path;
  long q = -1;
  bool exact = false;
  bool verify = false;
  std::optional<double> tol;
  double rank_rtol = 0.0;
  // verify
  std::string scope;
  std::uint64_t seed = 1;
  long count = 100;
  long max_dim = 8;
  std::string json_path;
};

const std::vector<std::string> kSquareKinds = {"pinv", "drazin", "group", "core", "core-ep", "bt", "qbt"};
const std::vector<std::string> kWeightedKinds = {"wdrazin", "wcore-ep", "wbt", "wqbt"};

bool is_weighted(const std::string& kind) {
  return std::find(kWeightedKinds.begin(), kWeightedKinds.end(), kind) != kWeightedKinds.end();
}

ToleranceModel tolerance(const Options& o, double fallback) {
  double atol = fallback;
  if (const char* env = std::getenv("GENINV_TOL")) {
    try {
      atol = std::stod(env);
    } catch (const std::exception&) {
      throw DomainError(std::string("GENINV_TOL is not a number: '") + env + "'");
    }
  }
  if (o.tol) atol = *o.tol;
  return ToleranceModel(o.rank_rtol, atol);
}

using Residuals = std::vector<std::pair<std::string, double>>;

// Defining equations of each kind, evaluated on the float value of X.
Residuals defining_residuals(const Options& o, const ComplexMatrix& a, const std::optional<ComplexMatrix>& w,
                             const ComplexMatrix& x, const ToleranceModel& tol) {
  const auto d = [](const ComplexMatrix& l, const ComplexMatrix& r) { return relative_distance(l, r); };
  const auto adj = [](const ComplexMatrix& m) { return conjugate_transpose(m); };
  Residuals out;
  if (o.kind == "pinv") {
    out = {{"axa_eq_a", d(a * x * a, a)},
           {"xax_eq_x", d(x * a * x, x)},
           {"ax_hermitian", d(adj(a * x), a * x)},
           {"xa_hermitian", d(adj(x * a), x * a)}};
  } else if (o.kind == "drazin" || o.kind == "group") {
    const Index k = matrix_index(a, tol).index;
    out = {{"xax_eq_x", d(x * a * x, x)}, {"ax_eq_xa", d(a * x, x * a)}, {"xa^{k+1}_eq_a^k", d(x * power(a, k + 1), power(a, k))}};
  } else if (o.kind == "core") {
    out = {{"ax_eq_pa", d(a * x, proj_range(a, tol))}, {"pa_x_eq_x", d(proj_range(a, tol) * x, x)}};
  } else if (o.kind == "core-ep" || o.kind == "bt" || o.kind == "qbt") {
    const Index q = o.kind == "bt" ? 1 : o.kind == "qbt" ? o.q : matrix_index(a, tol).index;
    const ComplexMatrix x0 = qbt_inverse(a, QBTParams(q), tol);
    out = {{"xax_eq_x", d(x * a * x, x)}, {"ax_eq_ax0", d(a * x, a * x0)}, {"xa_eq_x0a", d(x * a, x0 * a)}};
  } else if (o.kind == "wdrazin") {
    const WeightedPair p(a, *w, tol);
    const Index k = p.k();
    out = {{"xwawx_eq_x", d(x * p.waw() * x, x)},
           {"awx_eq_xwa", d(p.aw() * x, x * p.wa())},
           {"xw(aw)^{k+1}_eq_(aw)^k", d(x * p.w() * power(p.aw(), k + 1), power(p.aw(), k))}};
  } else {
    const WeightedPair p(a, *w, tol);
    const Index q = o.kind == "wbt" ? 1 : o.kind == "wqbt" ? o.q : p.k();
    for (const CheckResult& r : run_system_checks(p, q, x, tol)) {
      if (r.check_id.rfind("system.definition.", 0) == 0) out.emplace_back(r.check_id.substr(18), r.residuals[0].value);
    }
  }
  return out;
}

ComplexMatrix float_inverse(const Options& o, const ComplexMatrix& a, const std::optional<ComplexMatrix>& w,
                            const ToleranceModel& tol) {
  if (o.kind == "pinv") return pinv(a, tol);
  if (o.kind == "drazin") return drazin(a, tol);
  if (o.kind == "group") return group_inverse(a, tol);
  if (o.kind == "core") return core_inverse(a, tol);
  if (o.kind == "core-ep") return core_ep(a, tol);
  if (o.kind == "bt") return bt_inverse(a, tol);
  if (o.kind == "qbt") return qbt_inverse(a, QBTParams(o.q), tol);
  const WeightedPair p(a, *w, tol);
  if (o.kind == "wdrazin") return weighted_drazin(p, tol);
  if (o.kind == "wcore-ep") return weighted_core_ep(p, tol);
  if (o.kind == "wbt") return weighted_bt(p, tol);
  return weighted_qbt(p, QBTParams(o.q), tol);
}

void require_square(const RationalMatrix& a, const std::string& what) {
  if (!a.is_square()) throw ShapeError(what + ": expected a square matrix");
}

RationalMatrix exact_inverse_of(const Options& o, const RationalMatrix& a, const std::optional<RationalMatrix>& w) {
  if (o.kind == "pinv") return exact_pinv(a);
  if (!is_weighted(o.kind)) {
    require_square(a, o.kind);
    if (o.kind == "drazin") return exact_drazin(a);
    if (o.kind == "group" || o.kind == "core") {
      const Index k = exact_index(a);
      if (k > 1) throw IndexError(o.kind + " inverse needs Ind(A) <= 1, got " + std::to_string(k), std::size_t(k));
      const RationalMatrix g = exact_drazin(a);
      return o.kind == "group" ? g : g * a * exact_pinv(a);
    }
    if (o.kind == "core-ep") return exact_qbt(a, exact_index(a));
    if (o.kind == "bt") return exact_qbt(a, 1);
    return exact_qbt(a, o.q);
  }
  const RationalMatrix& wm = *w;
  if (a.rows() != wm.cols() || a.cols() != wm.rows())
    throw ShapeError("W must be " + std::to_string(a.cols()) + " x " + std::to_string(a.rows()));
  if (wm.is_zero()) throw DomainError("W must be nonzero");
  if (o.kind == "wdrazin") return exact_weighted_drazin(a, wm);
  if (o.kind == "wcore-ep") {
    const Index k = std::max(exact_index(a * wm), exact_index(wm * a));
    return exact_weighted_qbt(a, wm, k);
  }
  return exact_weighted_qbt(a, wm, o.kind == "wbt" ? 1 : o.q);
}

std::string with_residuals(const std::string& matrix_text, MatrixFormat format, const Residuals& residuals) {
  if (format == MatrixFormat::kCsv) {
    std::string out = matrix_text;
    for (const auto& [name, value] : residuals) out += "# residual " + name + " = " + format_double(value) + "\n";
    return out;
  }
  nlohmann::json doc = nlohmann::json::parse(matrix_text);
  for (const auto& [name, value] : residuals) doc["residuals"][name] = value;
  return doc.dump() + "\n";
}

int cmd_inverse(const Options& o) {
  if ((o.kind == "qbt" || o.kind == "wqbt") && o.q < 0) throw CLI::ValidationError("--q", "must be >= 0");
  const MatrixFormat format = format_from_path(o.a_path);
  const RationalMatrix a = read_matrix_file(o.a_path);
  std::optional<RationalMatrix> w;
  if (is_weighted(o.kind)) w = read_matrix_file(o.w_path);
  const ToleranceModel tol = tolerance(o, ToleranceModel::kDefaultResidualAtol);

  std::string text;
  ComplexMatrix x_float;
  if (o.exact) {
    const RationalMatrix x = exact_inverse_of(o, a, w);
    text = format_matrix(x, format);
    if (o.verify) x_float = float_of(x);
  } else {
    std::optional<ComplexMatrix> wf;
    if (w) wf = float_of(*w);
    x_float = float_inverse(o, float_of(a), wf, tol);
    text = format_matrix(x_float, format);
  }
  if (!o.verify) {
    std::cout << text;
    return kOk;
  }
  std::optional<ComplexMatrix> wf;
  if (w) wf = float_of(*w);
  const Residuals r = defining_residuals(o, float_of(a), wf, x_float, tol);
  std::cout << with_residuals(text, format, r);
  for (const auto& [name, value] : r)
    if (!(value <= tol.residual_atol())) return kVerification;
  return kOk;
}

int cmd_decompose(const Options& o) {
  const MatrixFormat format = format_from_path(o.a_path);
  const ComplexMatrix a = float_of(read_matrix_file(o.a_path));
  const ToleranceModel tol = tolerance(o, ToleranceModel::kDefaultResidualAtol);

  std::vector<std::pair<std::string, ComplexMatrix>> blocks;
  Residuals residuals;
  std::vector<std::pair<std::string, long>> sizes;
  if (o.kind == "core-ep") {
    const CoreEPDecomposition d = core_ep_decompose(a, tol);
    blocks = {{"U", d.u}, {"T", d.t}, {"S", d.s}, {"N", d.nil}};
    sizes = {{"r", long(d.rank())}, {"index", long(d.index)}};
    residuals = {{"unitarity", d.unitarity_residual},
                 {"reconstruction", d.reconstruction_residual},
                 {"nilpotency", d.nilpotency_residual},
                 {"t_sigma_min", d.t_sigma_min}};
  } else {
    const WeightedPair p(a, float_of(read_matrix_file(o.w_path)), tol);
    const WeightedCoreEPDecomposition d = weighted_core_ep_decompose(p, tol);
    blocks = {{"U", d.u},   {"V", d.v},   {"A1", d.a1}, {"A2", d.a2}, {"A3", d.a3},
              {"W1", d.w1}, {"W2", d.w2}, {"W3", d.w3}};
    sizes = {{"t", long(d.t_dim)}, {"ind_aw", long(d.ind_aw)}, {"ind_wa", long(d.ind_wa)}};
    residuals = {{"unitarity", d.unitarity_residual},
                 {"reconstruction", d.reconstruction_residual},
                 {"nilpotency", d.nilpotency_residual},
                 {"a1_sigma_min", d.a1_sigma_min},
                 {"w1_sigma_min", d.w1_sigma_min}};
  }

  if (format == MatrixFormat::kCsv) {
    for (const auto& [name, value] : sizes) std::cout << "# " << name << " = " << value << "\n";
    for (const auto& [name, m] : blocks)
      std::cout << "# " << name << " " << m.rows() << "x" << m.cols() << "\n" << format_matrix(m, format);
    for (const auto& [name, value] : residuals) std::cout << "# residual " << name << " = " << format_double(value) << "\n";
  } else {
    nlohmann::json doc;
    for (const auto& [name, value] : sizes) doc[name] = value;
    for (const auto& [name, m] : blocks) doc["blocks"][name] = nlohmann::json::parse(format_matrix(m, format));
    for (const auto& [name, value] : residuals) doc["residuals"][name] = value;
    std::cout << doc.dump() << "\n";
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.count < 1) throw CLI::ValidationError("--count", "must be >= 1");
  if (o.max_dim < 2) throw CLI::ValidationError("--max-dim", "must be >= 2");
  const ToleranceModel tol = tolerance(o, kCorpusDefaultTol);
  ConformanceReport report;
  if (o.scope == "paper") {
    report = run_paper_examples();
  } else {
    report = run_random_corpus(o.seed, o.count, o.max_dim, tol);
    if (o.scope == "all") report = merge_reports(run_paper_examples(), report);
  }
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    if (!out) throw DomainError("cannot write '" + o.json_path + "'");
    out << to_json(report) << "\n";
  }
  std::cout << to_text(report);
  return report.all_passed() ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized inverses (Moore-Penrose, Drazin, core-EP, BT, q-BT and W-weighted forms)"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "residual tolerance (default 1e-10, or GENINV_TOL)");
    sub->add_option("--rank-rtol", o.rank_rtol, "relative singular-value cutoff (0: max(m,n)*eps)")
        ->check(CLI::NonNegativeNumber);
  };

  for (const auto& kind : kSquareKinds) {
    CLI::App* sub = app.add_subcommand(kind, "compute the " + kind + " inverse of A");
    sub->add_option("A", o.a_path, "matrix file (.csv or .json)")->required();
    if (kind == "qbt") sub->add_option("--q", o.q, "q >= 0")->required()->check(CLI::NonNegativeNumber);
    sub->add_flag("--exact", o.exact, "exact rational path");
    sub->add_flag("--verify", o.verify, "append residuals of the defining equations");
    add_common(sub);
    sub->callback([&o, kind] { o.kind = kind; });
  }
  for (const auto& kind : kWeightedKinds) {
    CLI::App* sub = app.add_subcommand(kind, "compute the " + kind + " inverse of A with weight W");
    sub->add_option("A", o.a_path, "m x n matrix file")->required();
    sub->add_option("W", o.w_path, "n x m weight file")->required();
    if (kind == "wqbt") sub->add_option("--q", o.q, "q >= 0")->required()->check(CLI::NonNegativeNumber);
    sub->add_flag("--exact", o.exact, "exact rational path");
    sub->add_flag("--verify", o.verify, "append residuals of the defining equations");
    add_common(sub);
    sub->callback([&o, kind] { o.kind = kind; });
  }

  CLI::App* decompose = app.add_subcommand("decompose", "core-EP or weighted core-EP decomposition");
  std::string decompose_kind;
  decompose->add_option("kind", decompose_kind, "core-ep | weighted-core-ep")
      ->required()
      ->check(CLI::IsMember({"core-ep", "weighted-core-ep"}));
  decompose->add_option("A", o.a_path, "matrix file")->required();
  decompose->add_option("W", o.w_path, "weight file (weighted-core-ep)");
  add_common(decompose);

  CLI::App* verify = app.add_subcommand("verify", "run the conformance checks");
  verify->add_option("scope", o.scope, "paper | corpus | all")->required()->check(CLI::IsMember({"paper", "corpus", "all"}));
  verify->add_option("--seed", o.seed, "corpus seed");
  verify->add_option("--count", o.count, "corpus size");
  verify->add_option("--max-dim", o.max_dim, "largest corpus dimension");
  verify->add_option("--json", o.json_path, "also write the report as JSON");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (decompose->parsed()) {
      o.kind = decompose_kind;
      if (o.kind == "weighted-core-ep" && o.w_path.empty()) {
        std::cerr << "decompose weighted-core-ep: W is required\n";
        return kUsage;
      }
      return cmd_decompose(o);
    }
    if (verify->parsed()) return cmd_verify(o);
    return cmd_inverse(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
