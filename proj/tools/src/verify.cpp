#include "trieig/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "trieig/conditioning.hpp"
#include "trieig/oracle.hpp"
#include "trieig/solver.hpp"

namespace trieig::cli {
namespace {

std::uint64_t splitmix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

// Plain modular draws keep the streams identical across standard libraries.
class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t stream) : rng_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  bool coin() { return (rng_() >> 63) != 0; }

  Rational positive_rational(long max_num = 50, long max_den = 12) {
    Rational r(1 + static_cast<long>(below(max_num)), 1 + static_cast<long>(below(max_den)));
    r.canonicalize();
    return r;
  }

  ExactSystem system(std::size_t max_n, bool signed_entries) {
    ExactSystem sys;
    const std::size_t n = 1 + below(max_n);
    for (std::size_t i = 0; i < n; ++i) {
      Rational d = positive_rational();
      if (signed_entries && below(5) < 2) d = -d;
      sys.d.push_back(d);
    }
    sys.c = positive_rational();
    if (signed_entries && below(5) < 2) sys.c = -sys.c;
    return sys;
  }

 private:
  std::mt19937_64 rng_;
};

Json system_json(const ExactSystem& sys) {
  Json d = Json::array();
  for (const auto& v : sys.d) d.push_back(to_string(v));
  return Json{{"d", d}, {"c", to_string(sys.c)}};
}

Json system_json(const GeneralSystem& sys) { return Json{{"d", sys.d}, {"c", sys.c}}; }

using SystemPredicate = std::function<bool(const ExactSystem&)>;

// Greedy shrinking: drop rows, then replace entries by +-1, while the
// predicate keeps failing.
ExactSystem shrink(ExactSystem sys, const SystemPredicate& fails) {
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = sys.size(); i-- > 0 && sys.size() > 1;) {
      ExactSystem t = sys;
      t.d.erase(t.d.begin() + static_cast<std::ptrdiff_t>(i));
      if (fails(t)) {
        sys = std::move(t);
        progress = true;
      }
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const Rational unit = sgn(sys.d[i]) < 0 ? Rational(-1) : Rational(1);
      if (sys.d[i] == unit) continue;
      ExactSystem t = sys;
      t.d[i] = unit;
      if (fails(t)) {
        sys = std::move(t);
        progress = true;
      }
    }
    const Rational unit = sgn(sys.c) < 0 ? Rational(-1) : Rational(1);
    if (sys.c != unit) {
      ExactSystem t = sys;
      t.c = unit;
      if (fails(t)) {
        sys = std::move(t);
        progress = true;
      }
    }
  }
  return sys;
}

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  Json first_failure = nullptr;

  // Records one case; `describe` runs only for the first failure.
  void record(bool ok, const std::function<Json()>& describe) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = describe();
  }

  Json json() const {
    Json j;
    j["name"] = name;
    j["cases"] = cases;
    j["failures"] = failures;
    j["pass"] = failures == 0;
    j["first_failure"] = first_failure;
    return j;
  }
};

std::vector<std::size_t> sizes_up_to(std::initializer_list<std::size_t> all, std::size_t max_m) {
  std::vector<std::size_t> out;
  for (std::size_t m : all) {
    if (m <= max_m) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------

void suite_omega_identity(const VerifyConfig& cfg, SuiteResult& r) {
  Draw draw(cfg.seed, 1);
  const auto identity_fails = [](const ExactSystem& sys) {
    const auto seq = omega_sequence(sys);
    Rational sum = 0;
    for (std::size_t k = 0; k <= sys.size(); ++k) {
      if (seq.omega[k] != 1 + sum) return true;
      if (k < sys.size()) sum += seq.a[k] * seq.omega[k];
    }
    return solve_closed_form(sys) != substitute(sys);
  };
  for (int t = 0; t < 300; ++t) {
    const ExactSystem sys = draw.system(30, t >= 200);
    r.record(!identity_fails(sys), [&] {
      return Json{{"check", "omega identity / substitution"}, {"system", system_json(shrink(sys, identity_fails))}};
    });
  }
  // Extended substitution against the exact value of its double inputs.
  const double tol = std::ldexp(1.0, -40);
  for (int t = 0; t < 200; ++t) {
    GeneralSystem sys;
    const ExactSystem src = draw.system(30, false);
    for (const auto& d : src.d) sys.d.push_back(to_double(d));
    sys.c = to_double(src.c);
    const auto exact = solve_closed_form(to_exact(sys));
    const auto ext = ext_solve(sys);
    double worst = 0.0;
    for (std::size_t k = 0; k < sys.size(); ++k) {
      const ExtScalar want = to_ext(exact[k]);
      worst = std::max(worst, ((ext[k] - want) / want).abs().to_native().value_or(HUGE_VAL));
    }
    r.record(worst <= tol, [&] {
      return Json{{"check", "ext_solve relative error <= 2^-40"}, {"system", system_json(sys)}, {"error", worst}};
    });
  }
}

void suite_inverse(const VerifyConfig& cfg, SuiteResult& r) {
  Draw draw(cfg.seed, 2);
  const auto fails = [](const ExactSystem& sys) {
    const auto h = inverse_closed_form(sys);
    const std::size_t n = sys.size();
    for (std::size_t j = 0; j < n; ++j) {
      Rational above = 0;  // sum_{k<i} h_kj
      for (std::size_t i = 0; i < n; ++i) {
        const Rational gh = sys.d[i] * h(i, j) - sys.c * above;
        if (gh != (i == j ? 1 : 0)) return true;
        above += h(i, j);
      }
    }
    return false;
  };
  for (int t = 0; t < 100; ++t) {
    const ExactSystem sys = draw.system(20, t % 2 == 1);
    r.record(!fails(sys), [&] { return Json{{"check", "G H = I"}, {"system", system_json(shrink(sys, fails))}}; });
  }
}

void suite_eigen_relation(const VerifyConfig& cfg, SuiteResult& r) {
  Draw draw(cfg.seed, 3);
  const auto fails = [](const MatrixParams& p) {
    const auto a = build_A_exact(p);
    const auto x = eigenvector_matrix(p).dense_exact();
    const std::size_t m = p.m;
    for (std::size_t col = 0; col < m; ++col) {
      for (std::size_t i = 0; i < m; ++i) {
        Rational ax = 0;
        for (std::size_t k = 0; k < m; ++k) ax += a(i, k) * x(k, col);
        if (ax != a(col, col) * x(i, col)) return true;
      }
    }
    return false;
  };
  const std::size_t cap = std::min<std::size_t>(30, std::max<std::size_t>(cfg.max_m, 1));
  for (int t = 0; t < 30; ++t) {
    MatrixParams p;
    p.m = 1 + draw.below(cap);
    Rational a = draw.positive_rational(40, 9), b = draw.positive_rational(40, 9), c = draw.positive_rational(40, 9);
    if (draw.coin()) a = -a;
    if (draw.coin()) b = -b;
    if (draw.coin()) c = -c;
    p.a = to_double(a);
    p.b = to_double(b);
    p.c = to_double(c);
    p.orientation = draw.coin() ? Shape::Upper : Shape::Lower;
    r.record(!fails(p), [&] {
      MatrixParams small = p;
      while (small.m > 1) {
        MatrixParams next = small;
        --next.m;
        if (!fails(next)) break;
        small = next;
      }
      return Json{{"check", "A X = X Lambda"}, {"params", params_json(small)}};
    });
  }
}

void suite_growth(const VerifyConfig& cfg, SuiteResult& r) {
  std::vector<MatrixParams> cases;
  if (cfg.params) {
    cases.push_back(*cfg.params);
  } else {
    for (std::size_t m : sizes_up_to({5, 50, 200}, cfg.max_m)) cases.push_back({m, 0, 1, static_cast<double>(m)});
  }
  for (const MatrixParams& p : cases) {
    const GrowthFloorReport g = growth_floor_check(p);
    // Outside gamma >= m the floor is not claimed; a miss there is reported, not failed.
    r.record(g.pass || !g.guaranteed, [&] {
      Json j{{"check", "x_ij >= 2^(i-j)"}, {"params", params_json(p)}};
      if (g.first_violation) {
        j["row"] = g.first_violation->row;
        j["col"] = g.first_violation->col;
        j["value"] = g.first_violation->value;
      }
      return j;
    });
  }
}

const std::vector<Rational>& skeel_gammas() {
  static const std::vector<Rational> g{Rational(3, 2), Rational(2), Rational(5), Rational(10)};
  return g;
}

ExactSystem tail_system(const Rational& gamma, std::size_t n) {
  ExactSystem sys;
  for (std::size_t i = 1; i <= n; ++i) sys.d.emplace_back(static_cast<long>(i));
  sys.c = gamma;
  return sys;
}

constexpr std::size_t kSkeelSizes[] = {1, 2, 5, 20, 100, 250, 500};

void suite_skeel_vectors(const VerifyConfig& cfg, SuiteResult& r) {
  for (const Rational& gamma : skeel_gammas()) {
    for (std::size_t n : kSkeelSizes) {
      const ExactSystem sys = tail_system(gamma, n);
      const double kappa = skeel_exact(sys);
      const double via_vectors = skeel_from_vectors(sys);
      const double rel = std::fabs(kappa - via_vectors) / via_vectors;
      r.record(rel <= 1e-12, [&] {
        return Json{{"check", "skeel_exact == |skeelZ| / |x|"}, {"gamma", to_string(gamma)}, {"n", n}, {"rel", rel}};
      });
    }
  }
  Draw draw(cfg.seed, 5);
  for (int t = 0; t < 50; ++t) {
    const ExactSystem sys = draw.system(40, false);
    const auto fails = [](const ExactSystem& s) {
      const double via_vectors = skeel_from_vectors(s);
      return !(std::fabs(skeel_exact(s) - via_vectors) <= 1e-12 * via_vectors);
    };
    r.record(!fails(sys), [&] {
      return Json{{"check", "skeel_exact == |skeelZ| / |x|"}, {"system", system_json(shrink(sys, fails))}};
    });
  }
}

void suite_skeel_bound(const VerifyConfig& cfg, SuiteResult& r) {
  if (cfg.params) {
    const MatrixParams& p = *cfg.params;
    const double gamma = p.c / p.b;
    if (p.m < 2 || !(gamma > 1.0) || !(p.b > 0.0)) return;
    std::vector<std::size_t> columns;
    if (p.m <= 200) {
      for (std::size_t j = 1; j < p.m; ++j) columns.push_back(j);
    } else {
      columns = {1, p.m / 2, p.m - 1};
    }
    for (std::size_t j : columns) {
      const CondReport c = condition_report(p, j);
      r.record(c.kappa_exact < *c.kappa_bound, [&] {
        return Json{{"check", "kappa < bound"}, {"params", params_json(p)}, {"j", j}, {"kappa", c.kappa_exact},
                    {"bound", *c.kappa_bound}};
      });
    }
    return;
  }
  for (const Rational& gamma : skeel_gammas()) {
    for (std::size_t n : kSkeelSizes) {
      const double kappa = skeel_exact(tail_system(gamma, n));
      const double bound = skeel_bound(to_double(gamma), n);
      r.record(kappa < bound, [&] {
        return Json{{"check", "kappa < bound"}, {"gamma", to_string(gamma)}, {"n", n}, {"kappa", kappa}, {"bound", bound}};
      });
    }
  }
  for (std::size_t m : sizes_up_to({5, 50, 200, 500}, std::max<std::size_t>(cfg.max_m, 500))) {
    const double md = static_cast<double>(m);
    const double kappa = skeel_exact(tail_system(Rational(static_cast<long>(m)), m));
    const double bound = skeel_bound(md, m);
    const double special = 2.0 * (1.0 + md * std::log(2.0));
    r.record(kappa < bound && bound <= special + 1e-9, [&] {
      return Json{{"check", "kappa < bound <= 2(1 + m ln 2)"}, {"m", m}, {"kappa", kappa}, {"bound", bound}};
    });
  }
}

bool robust_matches_naive(const GeneralSystem& sys) {
  const SolveOutcome naive = naive_solve(sys);
  if (naive.status != SolveStatus::Ok) return true;
  const ScaledVector robust = robust_solve(sys);
  if (robust.scale_exp == 0) return robust.values == naive.result.values;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const double want = naive.result.values[k];
    const double got = std::ldexp(robust.values[k], static_cast<int>(-robust.scale_exp));
    const double ulp = std::fabs(std::nextafter(want, HUGE_VAL) - want);
    if (!(std::fabs(got - want) <= 2 * ulp)) return false;
  }
  return true;
}

// Per-component log2 agreement with tolerance tol * max(1, |log2 want|).
// Components a single scale factor pushes below the normal range only have
// to be tiny.
bool scaled_matches(const ScaledVector& v, const std::vector<double>& want_log2, double tol) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = want_log2[i];
    if (std::isinf(w)) {
      if (v.values[i] != 0.0) return false;
      continue;
    }
    if (w + static_cast<double>(v.scale_exp) < -1022.0) {
      if (!(std::fabs(v.values[i]) < std::numeric_limits<double>::min())) return false;
      continue;
    }
    if (!(std::fabs(v.component(i).log2_abs() - w) <= tol * std::max(1.0, std::fabs(w)))) return false;
  }
  return true;
}

bool ext_matches(const std::vector<ExtScalar>& v, const std::vector<double>& want_log2, double tol) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = want_log2[i];
    if (std::isinf(w)) {
      if (!v[i].is_zero()) return false;
      continue;
    }
    if (!(std::fabs(v[i].log2_abs() - w) <= tol * std::max(1.0, std::fabs(w)))) return false;
  }
  return true;
}

void robust_campaign(const MatrixParams& p, SuiteResult& r) {
  const std::size_t m = p.m;
  const EigenDecomposition eig = eigenvector_matrix(p);
  std::vector<double> z_log2(m);
  for (std::size_t k = 0; k < m; ++k) {
    const ExtScalar z = eig.growth().ext(k);
    z_log2[k] = z.is_zero() ? -HUGE_VAL : z.log2_abs();
  }
  const auto robust = eigenvectors(p, Method::Robust);
  const auto ext = eigenvectors(p, Method::Extended);
  const TriMatrix a = build_A(p);
  const double gamma = p.c / p.b;

  for (std::size_t j = 1; j <= m; ++j) {
    // Expected log2 per component. Eigenvalue j sits on diagonal entry j of
    // the lower matrix and m + 1 - j of the upper one.
    const std::size_t col = p.orientation == Shape::Lower ? j - 1 : m - j;
    std::vector<double> want(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto k = eig.offset(i, col);
      want[i] = k ? z_log2[*k] : -HUGE_VAL;
    }
    const auto& rc = robust[j - 1];
    const bool robust_ok = rc.status == SolveStatus::Ok &&
                           scaled_matches(std::get<ScaledVector>(rc.vector), want, 1e-9);
    const bool ext_ok = ext_matches(std::get<std::vector<ExtScalar>>(ext[j - 1].vector), want, 1e-9);
    r.record(robust_ok && ext_ok, [&] {
      return Json{{"check", "robust and ext match oracle log2 within 1e-9"}, {"params", params_json(p)}, {"j", j},
                  {"robust", robust_ok}, {"ext", ext_ok}};
    });

    // Naive overflow must coincide with omega_{n+1} = prod (1 + gamma / i)
    // reaching the double limit.
    const std::size_t n = m - j;
    double omega_log2 = 0.0;
    for (std::size_t i = 1; i <= n; ++i) omega_log2 += std::log2(1.0 + gamma / static_cast<double>(i));
    const auto naive = eigenvector(p, Method::Naive, j);
    const bool consistent = naive.status == SolveStatus::Ok ? omega_log2 < 1024.01 : omega_log2 > 1023.99;
    r.record(consistent, [&] {
      return Json{{"check", "naive overflow iff the oracle leaves the double range"},
                  {"params", params_json(p)},
                  {"j", j},
                  {"naive_status", naive.status == SolveStatus::Ok ? "Ok" : "OverflowDetected"},
                  {"omega_log2", omega_log2}};
    });
  }
  for (std::size_t j : {std::size_t{1}, (m + 1) / 2, m}) {
    const double res = residual(a, robust[j - 1].lambda, std::get<ScaledVector>(robust[j - 1].vector))
                           .to_native()
                           .value_or(HUGE_VAL);
    r.record(res <= 1e-12, [&] {
      return Json{{"check", "scaled residual <= 1e-12"}, {"params", params_json(p)}, {"j", j}, {"residual", res}};
    });
  }
}

void suite_robust_naive(const VerifyConfig& cfg, SuiteResult& r) {
  Draw draw(cfg.seed, 7);
  for (int t = 0; t < 300; ++t) {
    GeneralSystem sys;
    const std::size_t n = 1 + draw.below(60);
    const auto value = [&] {
      double v = static_cast<double>(1 + draw.below(1000)) / static_cast<double>(1 + draw.below(50));
      v = std::ldexp(v, static_cast<int>(draw.below(41)) - 20);
      return draw.below(5) < 2 ? -v : v;
    };
    for (std::size_t i = 0; i < n; ++i) sys.d.push_back(value());
    sys.c = value();
    r.record(robust_matches_naive(sys), [&] {
      return Json{{"check", "robust == naive when naive finishes"}, {"system", system_json(sys)}};
    });
  }
  if (cfg.params) {
    if (cfg.params->b != 0.0) robust_campaign(*cfg.params, r);
    return;
  }
  for (std::size_t m : sizes_up_to({100, 600, 2000}, cfg.max_m)) robust_campaign({m, 0, 1, static_cast<double>(m)}, r);
}

void suite_asymptotics(const VerifyConfig&, SuiteResult& r) {
  const std::pair<double, Asymptotics> table[] = {
      {3.0, Asymptotics::Diverges},       {0.0, Asymptotics::ConstantOne},
      {-1.0, Asymptotics::EventuallyZero}, {-2.0, Asymptotics::EventuallyZero},
      {-0.5, Asymptotics::TendsToZeroSublinearly}, {-2.5, Asymptotics::TendsToZeroSublinearly}};
  for (const auto& [alpha, want] : table) {
    const Asymptotics got = classify_asymptotics(alpha);
    r.record(got == want, [&] {
      return Json{{"check", "classification"}, {"alpha", alpha}, {"got", to_string(got)}, {"want", to_string(want)}};
    });

    // y_k = binom(alpha + k, k) is the growth sequence for gamma = alpha + 1.
    const auto y = growth_sequence(GammaRatio::exact(recover_or_exact(alpha + 1.0)), 200).exact();
    bool prefix_ok = true;
    if (alpha > 0) {
      for (std::size_t k = 1; k < y.size(); ++k) prefix_ok = prefix_ok && y[k] > y[k - 1];
    } else if (alpha == 0) {
      for (const auto& v : y) prefix_ok = prefix_ok && v == 1;
    } else if (alpha == std::floor(alpha)) {
      for (std::size_t k = static_cast<std::size_t>(-alpha); k < y.size(); ++k) prefix_ok = prefix_ok && y[k] == 0;
    } else {
      for (std::size_t k = static_cast<std::size_t>(std::ceil(-alpha)); k + 1 < y.size(); ++k) {
        prefix_ok = prefix_ok && y[k] != 0 && abs(y[k + 1]) < abs(y[k]);
      }
      const auto far = growth_sequence(GammaRatio::approximate(alpha + 1.0), 10001);
      const double ratio = (far.ext(10001) / far.ext(10000)).to_native().value_or(HUGE_VAL);
      prefix_ok = prefix_ok && std::fabs(ratio - 1.0) <= 1e-3;
    }
    r.record(prefix_ok, [&] { return Json{{"check", "finite-prefix behaviour"}, {"alpha", alpha}}; });
  }
}

void suite_perturbation(const VerifyConfig& cfg, SuiteResult& r) {
  const MatrixParams p{50, 0, 1, 50};
  for (std::size_t j : {1, 25}) {
    for (PerturbTarget target : {PerturbTarget::MatrixAndRhs, PerturbTarget::MatrixOnly}) {
      const PerturbStats s = perturbation_experiment(p, j, 1e-8, 1000, cfg.seed, target);
      r.record(s.max_ratio <= kPerturbationSafety, [&] {
        return Json{{"check", "max ratio <= 4"}, {"params", params_json(p)}, {"j", j}, {"ratio", s.max_ratio}};
      });
    }
  }
}

using SuiteFn = void (*)(const VerifyConfig&, SuiteResult&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"omega_identity", suite_omega_identity}, {"inverse", suite_inverse},
      {"eigen_relation", suite_eigen_relation}, {"growth", suite_growth},
      {"skeel_vectors", suite_skeel_vectors},       {"skeel_bound", suite_skeel_bound},
      {"robust_naive", suite_robust_naive},     {"asymptotics", suite_asymptotics},
      {"perturbation", suite_perturbation}};
  return suites;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

VerifyResult run_verify(const VerifyConfig& config) {
  for (const auto& s : config.suites) {
    const auto& names = verify_suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw std::invalid_argument("unknown suite '" + s + "'");
    }
  }
  if (config.params) config.params->validate();

  VerifyResult result;
  Json suites = Json::array();
  for (const auto& [name, fn] : registry()) {
    if (!config.suites.empty() && std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end()) {
      continue;
    }
    SuiteResult r;
    r.name = name;
    fn(config, r);
    result.pass = result.pass && r.failures == 0;
    suites.push_back(r.json());
  }
  Json& rep = result.report;
  rep["command"] = "verify";
  rep["seed"] = config.seed;
  rep["max_m"] = config.max_m;
  rep["params"] = config.params ? params_json(*config.params) : Json(nullptr);
  rep["suites"] = std::move(suites);
  rep["pass"] = result.pass;
  return result;
}

}  // namespace trieig::cli
