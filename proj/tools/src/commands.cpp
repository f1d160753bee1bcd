#include "trieig/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "trieig/cli/report.hpp"
#include "trieig/cli/verify.hpp"
#include "trieig/conditioning.hpp"
#include "trieig/matrix_market.hpp"
#include "trieig/oracle.hpp"
#include "trieig/solver.hpp"

namespace trieig::cli {
namespace {

// Raised by a command for plumbing errors (bad output path, unsupported
// output for the requested data).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::size_t m = 0;
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  bool upper = false;
  CLI::Option* m_opt = nullptr;

  void add(CLI::App* app, bool m_required) {
    m_opt = app->add_option("-m", m, "dimension m >= 1");
    if (m_required) m_opt->required();
    app->add_option("-a", a, "diagonal offset a")->capture_default_str();
    app->add_option("-b", b, "diagonal step b")->capture_default_str();
    app->add_option("-c", c, "negated subdiagonal value c")->capture_default_str();
    app->add_flag("--upper", upper, "use the upper triangular form J A J");
  }

  MatrixParams params() const {
    MatrixParams p{m, a, b, c, upper ? Shape::Upper : Shape::Lower};
    p.validate();
    return p;
  }
};

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string summary(const MatrixParams& p) {
  std::string gamma = "undefined";
  if (p.b != 0.0) {
    const GammaRatio g = GammaRatio::from_params(p);
    gamma = g.is_exact() ? to_string(g.exact_value()) : format_double(g.value());
  }
  return "m=" + std::to_string(p.m) + " a=" + format_double(p.a) + " b=" + format_double(p.b) +
         " c=" + format_double(p.c) + " gamma=" + gamma + " orientation=" + to_string(p.orientation);
}

// Writes to `path`, or to `out` when path is "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw UsageError("failed writing '" + path + "'");
}

// --- gen --------------------------------------------------------------------

struct GenFlags {
  ParamFlags p;
  std::string what = "A";
  std::string format = "matrix-market";
  std::string layout = "array";
  std::string output;
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
  const MatrixParams p = f.p.params();
  const bool mm = f.format == "matrix-market";
  const std::string path = f.output.empty() ? f.what + (mm ? ".mtx" : ".json") : f.output;
  const std::string comment = "trieig " + f.what + ": " + summary(p);

  std::ostringstream text;
  if (f.what == "A") {
    const TriMatrix a = build_A(p);
    if (mm) {
      write_matrix_market(text, a, f.layout == "array" ? MarketLayout::Array : MarketLayout::Coordinate, comment);
    } else {
      Json rows = Json::array();
      for (std::size_t i = 0; i < p.m; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < p.m; ++j) row.push_back(a(i, j));
        rows.push_back(std::move(row));
      }
      text << dump_json(Json{{"matrix", "A"}, {"params", params_json(p)}, {"entries", rows}});
    }
  } else {
    if (p.b == 0.0) throw std::domain_error("X needs b != 0");
    const EigenDecomposition eig = eigenvector_matrix(p);
    if (mm) {
      TriMatrix x(p.m, p.orientation);
      try {
        x = eig.dense_native();
      } catch (const std::range_error& e) {
        throw UsageError(std::string(e.what()) + "; use --format json");
      }
      write_matrix_market(text, x, f.layout == "array" ? MarketLayout::Array : MarketLayout::Coordinate, comment);
    } else {
      Json rows = Json::array();
      for (std::size_t i = 0; i < p.m; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < p.m; ++j) {
          const auto k = eig.offset(i, j);
          row.push_back(k ? eig.growth().text(*k) : "0");
        }
        rows.push_back(std::move(row));
      }
      Json lambdas = eig.lambdas();
      text << dump_json(Json{{"matrix", "X"},
                        {"params", params_json(p)},
                        {"exact", eig.is_exact()},
                        {"lambdas", lambdas},
                        {"entries", rows}});
    }
  }
  emit(path, out, text.str());
  if (path != "-") out << "gen " << f.what << ": " << summary(p) << " -> " << path << "\n";
  return kExitOk;
}

// --- eig --------------------------------------------------------------------

struct EigFlags {
  ParamFlags p;
  std::string method = "robust";
  std::string expect;
  std::string vectors = "auto";
  unsigned threads = 1;
  bool residuals = true;
  std::string output = "-";
};

Method parse_method(const std::string& s) {
  if (s == "naive") return Method::Naive;
  if (s == "robust") return Method::Robust;
  return Method::Extended;
}

int cmd_eig(const EigFlags& f, std::ostream& out) {
  const MatrixParams p = f.p.params();
  if (p.b == 0.0) throw std::domain_error("eigenvectors need b != 0");
  const Method method = parse_method(f.method);
  const auto cols = eigenvectors(p, method, f.threads);
  const bool with_vectors = f.vectors == "on" || (f.vectors == "auto" && p.m <= 50);
  const TriMatrix a = build_A(p);

  Json columns = Json::array();
  std::size_t ok = 0;
  std::optional<ExtScalar> worst_residual;
  for (const auto& col : cols) {
    Json c;
    c["j"] = col.eigen_index;
    c["lambda"] = col.lambda;
    c["status"] = col.status == SolveStatus::Ok ? "Ok" : "OverflowDetected";
    c["overflow_row"] = col.overflow_row ? Json(*col.overflow_row) : Json(nullptr);
    if (col.status == SolveStatus::Ok) {
      ++ok;
      const auto* sv = std::get_if<ScaledVector>(&col.vector);
      c["scale_exp"] = sv ? Json(sv->scale_exp) : Json(nullptr);
      c["max_log2"] = col.max_log2();
      if (f.residuals) {
        const ExtScalar r = sv ? residual(a, col.lambda, *sv)
                               : residual(a, col.lambda, std::get<std::vector<ExtScalar>>(col.vector));
        c["residual"] = number_or_ext(r);
        if (!worst_residual || r > *worst_residual) worst_residual = r;
      }
      if (with_vectors) {
        if (sv) {
          c["values"] = sv->values;
        } else {
          Json v = Json::array();
          for (const auto& e : std::get<std::vector<ExtScalar>>(col.vector)) v.push_back(e.to_string());
          c["values"] = v;
        }
      }
    }
    columns.push_back(std::move(c));
  }
  Json rep;
  rep["command"] = "eig";
  rep["params"] = params_json(p);
  rep["method"] = to_string(method);
  rep["columns_ok"] = ok;
  rep["columns_overflow"] = cols.size() - ok;
  rep["max_residual"] = worst_residual ? number_or_ext(*worst_residual) : Json(nullptr);
  rep["columns"] = std::move(columns);
  emit(f.output, out, dump_json(rep));
  if (f.expect == "ok" && ok != cols.size()) return kExitVerifyFailed;
  return kExitOk;
}

// --- cond -------------------------------------------------------------------

struct CondFlags {
  ParamFlags p;
  std::size_t j = 1;
  std::size_t trials = 0;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  std::string output = "-";
};

Json perturb_json(const PerturbStats& s) {
  return Json{{"epsilon", s.epsilon},        {"trials", s.trials},
              {"seed", s.seed},              {"max_ratio", s.max_ratio},
              {"kappa_bound", s.kappa_bound}, {"safety", kPerturbationSafety},
              {"pass", s.max_ratio <= kPerturbationSafety}};
}

int cmd_cond(const CondFlags& f, std::ostream& out) {
  const MatrixParams p = f.p.params();
  CondReport r = condition_report(p, f.j);
  if (f.trials > 0) r.perturb_stats = perturbation_experiment(p, f.j, f.epsilon, f.trials, f.seed);

  Json rep;
  rep["command"] = "cond";
  rep["params"] = params_json(p);
  rep["j"] = r.j;
  rep["n"] = r.n;
  rep["exact"] = r.exact;
  rep["kappa_exact"] = r.kappa_exact;
  rep["kappa_bound"] = r.kappa_bound ? Json(*r.kappa_bound) : Json(nullptr);
  rep["margin"] = r.kappa_bound ? Json(*r.kappa_bound - r.kappa_exact) : Json(nullptr);
  rep["within_bound"] = r.kappa_bound ? Json(r.kappa_exact <= *r.kappa_bound) : Json(nullptr);
  rep["perturb_stats"] = r.perturb_stats ? perturb_json(*r.perturb_stats) : Json(nullptr);
  emit(f.output, out, dump_json(rep));
  const bool bound_ok = !r.kappa_bound || r.kappa_exact <= *r.kappa_bound;
  const bool perturb_ok = !r.perturb_stats || r.perturb_stats->max_ratio <= kPerturbationSafety;
  return bound_ok && perturb_ok ? kExitOk : kExitVerifyFailed;
}

// --- growth -----------------------------------------------------------------

struct GrowthFlags {
  ParamFlags p;
  bool expect_pass = false;
  std::string output = "-";
};

int cmd_growth(const GrowthFlags& f, std::ostream& out) {
  const MatrixParams p = f.p.params();
  const GrowthFloorReport g = growth_floor_check(p);
  const GammaRatio gamma = GammaRatio::from_params(p);

  Json rep;
  rep["command"] = "growth";
  rep["params"] = params_json(p);
  rep["exact"] = g.exact;
  rep["guaranteed"] = g.guaranteed;
  rep["entries_checked"] = g.entries_checked;
  rep["pass"] = g.pass;
  if (g.first_violation) {
    rep["first_violation"] = Json{{"row", g.first_violation->row},
                                  {"col", g.first_violation->col},
                                  {"value", g.first_violation->value},
                                  {"log2", g.first_violation->value_log2},
                                  {"floor_log2", g.first_violation->row - g.first_violation->col}};
  } else {
    rep["first_violation"] = nullptr;
  }
  rep["asymptotics"] = to_string(classify_asymptotics(gamma.value() - 1.0));
  const std::size_t last = p.m - 1;
  const GrowthSequence z = growth_sequence(gamma, last);
  rep["z_last"] = Json{{"k", last}, {"value", z.text(last)}, {"log2", ext_json(z.ext(last))["log2"]}};
  emit(f.output, out, dump_json(rep));
  if (!g.pass && (g.guaranteed || f.expect_pass)) return kExitVerifyFailed;
  return kExitOk;
}

// --- perturb ----------------------------------------------------------------

struct PerturbFlags {
  ParamFlags p;
  std::size_t j = 1;
  std::size_t trials = 1000;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  std::string target = "both";
  std::string output = "-";
};

int cmd_perturb(const PerturbFlags& f, std::ostream& out) {
  const MatrixParams p = f.p.params();
  const PerturbTarget target = f.target == "matrix" ? PerturbTarget::MatrixOnly : PerturbTarget::MatrixAndRhs;
  const PerturbStats s = perturbation_experiment(p, f.j, f.epsilon, f.trials, f.seed, target);
  Json rep;
  rep["command"] = "perturb";
  rep["params"] = params_json(p);
  rep["j"] = f.j;
  rep["target"] = f.target;
  rep["stats"] = perturb_json(s);
  rep["eigenvalue_shift"] = eigenvalue_sensitivity(p, f.epsilon);
  emit(f.output, out, dump_json(rep));
  return s.max_ratio <= kPerturbationSafety ? kExitOk : kExitVerifyFailed;
}

// --- verify -----------------------------------------------------------------

struct VerifyFlags {
  ParamFlags p;
  std::vector<std::string> suites;
  std::size_t max_m = 200;
  std::uint64_t seed = 1;
  std::string output = "-";
};

int cmd_verify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
  VerifyConfig cfg;
  cfg.suites = f.suites;
  cfg.max_m = f.max_m;
  cfg.seed = f.seed;
  if (f.p.m_opt->count() > 0) cfg.params = f.p.params();
  const VerifyResult r = run_verify(cfg);
  emit(f.output, out, dump_json(r.report));
  if (r.pass) return kExitOk;
  for (const auto& suite : r.report["suites"]) {
    if (!suite["pass"].get<bool>()) err << "FAIL " << suite["name"].get<std::string>() << ": " << suite["first_failure"].dump() << "\n";
  }
  return kExitVerifyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generator, solvers and checks for triangular test matrices with known eigenvectors", "trieig"};
  app.require_subcommand(1);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write A or its eigenvector matrix X");
  gen.p.add(gen_cmd, true);
  gen_cmd->add_option("--what", gen.what, "A or X")->check(CLI::IsMember({"A", "X"}))->capture_default_str();
  gen_cmd->add_option("--format", gen.format, "matrix-market or json")
      ->check(CLI::IsMember({"matrix-market", "json"}))
      ->capture_default_str();
  gen_cmd->add_option("--layout", gen.layout, "Matrix Market layout: array or coordinate")
      ->check(CLI::IsMember({"array", "coordinate"}))
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "output path ('-' for stdout); default <what>.mtx or <what>.json");

  EigFlags eig;
  CLI::App* eig_cmd = app.add_subcommand("eig", "compute all eigenvectors and their residuals");
  eig.p.add(eig_cmd, true);
  eig_cmd->add_option("--method", eig.method, "naive, robust or extended")
      ->check(CLI::IsMember({"naive", "robust", "extended"}))
      ->capture_default_str();
  eig_cmd->add_option("--expect", eig.expect, "'ok': exit 3 unless every column is Ok")->check(CLI::IsMember({"ok"}));
  eig_cmd->add_option("--vectors", eig.vectors, "include vectors: auto (m <= 50), on, off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  eig_cmd->add_option("--threads", eig.threads, "worker threads for the columns")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  eig_cmd->add_flag("!--no-residuals", eig.residuals, "skip residual evaluation");
  eig_cmd->add_option("-o,--output", eig.output, "report path, '-' for stdout")->capture_default_str();

  CondFlags cond;
  CLI::App* cond_cmd = app.add_subcommand("cond", "Skeel condition number of an eigenvector subsystem");
  cond.p.add(cond_cmd, true);
  cond_cmd->add_option("-j", cond.j, "eigen-index, 1 <= j < m")->required();
  cond_cmd->add_option("--trials", cond.trials, "also run a perturbation experiment with this many trials");
  cond_cmd->add_option("--epsilon", cond.epsilon, "perturbation size")->capture_default_str();
  cond_cmd->add_option("--seed", cond.seed, "perturbation seed")->capture_default_str();
  cond_cmd->add_option("-o,--output", cond.output, "report path, '-' for stdout")->capture_default_str();

  GrowthFlags growth;
  CLI::App* growth_cmd = app.add_subcommand("growth", "check x_ij >= 2^(i-j) over X");
  growth.p.add(growth_cmd, true);
  growth_cmd->add_flag("--expect-pass", growth.expect_pass, "exit 3 on a miss even when gamma < m");
  growth_cmd->add_option("-o,--output", growth.output, "report path, '-' for stdout")->capture_default_str();

  PerturbFlags perturb;
  CLI::App* perturb_cmd = app.add_subcommand("perturb", "componentwise perturbation experiment");
  perturb.p.add(perturb_cmd, true);
  perturb_cmd->add_option("-j", perturb.j, "eigen-index, 1 <= j < m")->required();
  perturb_cmd->add_option("--epsilon", perturb.epsilon, "relative perturbation size")->capture_default_str();
  perturb_cmd->add_option("--trials", perturb.trials, "number of trials")->capture_default_str();
  perturb_cmd->add_option("--seed", perturb.seed, "seed")->capture_default_str();
  perturb_cmd->add_option("--target", perturb.target, "both: B and f; matrix: B only")
      ->check(CLI::IsMember({"both", "matrix"}))
      ->capture_default_str();
  perturb_cmd->add_option("-o,--output", perturb.output, "report path, '-' for stdout")->capture_default_str();

  VerifyFlags verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the property suites");
  verify.p.add(verify_cmd, false);
  verify_cmd->add_option("--suite", verify.suites, "suite to run (repeatable); default all")
      ->check(CLI::IsMember(verify_suite_names()));
  verify_cmd->add_option("--max-m", verify.max_m, "largest m in the size campaigns")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "seed for the random cases")->capture_default_str();
  verify_cmd->add_option("-o,--output", verify.output, "report path, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*eig_cmd) return cmd_eig(eig, out);
    if (*cond_cmd) return cmd_cond(cond, out);
    if (*growth_cmd) return cmd_growth(growth, out);
    if (*perturb_cmd) return cmd_perturb(perturb, out);
    if (*verify_cmd) return cmd_verify(verify, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace trieig::cli
