#include "trieig/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "trieig/oracle.hpp"

namespace trieig {
namespace {

double to_native_checked(const Rational& v) { return to_double(v); }

double to_native_checked(const ExtScalar& v) {
  const auto d = v.to_native();
  if (!d) throw std::range_error("condition number outside double range");
  return *d;
}

template <class T>
T max_abs(const std::vector<T>& v) {
  T best(0);
  for (const T& e : v) {
    const T mag(abs(e));
    if (mag > best) best = mag;
  }
  return best;
}

// || |H| |G| |x| ||_inf / ||x||_inf with H from the closed form. Both
// products are evaluated row by row; when every omega_{j+1} is nonzero the
// entries |h_ij| = |a_i omega_i| / |d_j omega_{j+1}| factor, and the sum over
// j becomes a running prefix.
template <class T>
double skeel_closed_form(const BasicSystem<T>& sys) {
  const auto seq = omega_sequence(sys);
  const std::size_t n = sys.size();
  if (n == 0) throw std::domain_error("Skeel condition number of an empty system");
  if (sys.c == T(0)) return 1.0;  // diagonal system, |B^-1||B| = I

  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = T(seq.a[i] * seq.omega[i]);

  // g = |G| |x|
  std::vector<T> g(n);
  const T c_abs(abs(sys.c));
  T prefix(0);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = T(abs(sys.d[i]) * abs(x[i]) + c_abs * prefix);
    prefix += T(abs(x[i]));
  }

  std::vector<T> z(n);
  const bool factorable =
      std::none_of(seq.omega.begin() + 1, seq.omega.end() - 1, [](const T& w) { return w == T(0); });
  if (factorable) {
    T tail(0);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = T(g[i] / abs(sys.d[i]) + abs(seq.a[i] * seq.omega[i]) * tail);
      if (i + 1 < n) tail += T(g[i] / abs(sys.d[i] * seq.omega[i + 1]));
    }
  } else {
    const auto h = inverse_closed_form(sys);
    for (std::size_t i = 0; i < n; ++i) {
      T acc(0);
      for (std::size_t j = 0; j <= i; ++j) acc += T(abs(h(i, j)) * g[j]);
      z[i] = acc;
    }
  }
  return to_native_checked(T(max_abs(z) / max_abs(x)));
}

std::uint64_t splitmix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

}  // namespace

double skeel_exact(const ExactSystem& sys) { return skeel_closed_form(sys); }
double skeel_exact(const ExtSystem& sys) { return skeel_closed_form(sys); }
double skeel_exact(const GeneralSystem& sys) { return skeel_closed_form(to_exact(sys)); }

double skeel_from_vectors(const ExactSystem& sys) {
  const auto vectors = skeel_vectors(sys);
  const auto x = solve_closed_form(sys);
  return to_double(Rational(max_abs(vectors.skeel_z) / max_abs(x)));
}

double skeel_eigen_subsystem(const MatrixParams& params, std::size_t j) {
  const GammaRatio gamma = GammaRatio::from_params(params);
  if (gamma.is_exact()) return skeel_exact(build_eigvec_subsystem_exact(params, j));
  return skeel_exact(to_ext(build_eigvec_subsystem(params, j)));
}

double skeel_bound(double gamma, std::size_t n) {
  if (!(gamma > 1.0)) throw std::domain_error("Skeel bound needs gamma > 1");
  if (n < 1) throw std::domain_error("Skeel bound needs n >= 1");
  // log((gamma + n - 1) / gamma) == log1p((n - 1) / gamma)
  return 2.0 * (1.0 + gamma * std::log1p(static_cast<double>(n - 1) / gamma));
}

CondReport condition_report(const MatrixParams& params, std::size_t j) {
  params.validate();
  if (j < 1 || j >= params.m) throw std::out_of_range("condition_report needs 1 <= j < m");
  CondReport report;
  report.j = j;
  report.n = params.m - j;
  report.exact = GammaRatio::from_params(params).is_exact();
  report.kappa_exact = skeel_eigen_subsystem(params, j);
  const double gamma = params.c / params.b;
  if (gamma > 1.0) report.kappa_bound = skeel_bound(gamma, report.n);
  return report;
}

PerturbStats perturbation_experiment(const MatrixParams& params, std::size_t j, double epsilon,
                                     std::size_t trials, std::uint64_t seed, PerturbTarget target) {
  params.validate();
  if (!(params.b > 0.0) || !(params.c > 0.0)) {
    throw std::domain_error("perturbation experiment needs b > 0 and c > 0");
  }
  const double gamma = params.c / params.b;
  if (!(gamma > 1.0)) throw std::domain_error("perturbation experiment needs gamma > 1");
  if (!(epsilon > 0.0 && epsilon <= 1e-4)) throw std::domain_error("epsilon must lie in (0, 1e-4]");
  if (trials < 1) throw std::domain_error("at least one trial is required");
  if (j < 1 || j >= params.m) throw std::out_of_range("perturbation experiment needs 1 <= j < m");

  const GeneralSystem sys = build_eigvec_subsystem(params, j);
  const std::size_t n = sys.size();

  std::vector<ExtScalar> x;
  if (GammaRatio::from_params(params).is_exact()) {
    for (const Rational& v : solve_closed_form(build_eigvec_subsystem_exact(params, j))) x.push_back(to_ext(v));
  } else {
    x = solve_closed_form(to_ext(sys));
  }
  const ExtScalar x_norm = max_abs(x);

  PerturbStats stats;
  stats.epsilon = epsilon;
  stats.trials = trials;
  stats.seed = seed;
  stats.kappa_bound = skeel_bound(gamma, n);

  const ExtScalar c(sys.c);
  std::vector<ExtScalar> xt(n);
  ExtScalar worst;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(t)));
    const auto factor = [&] {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return ExtScalar(1.0 + epsilon * (2.0 * u - 1.0));
    };
    ExtScalar err;
    for (std::size_t i = 0; i < n; ++i) {
      ExtScalar acc;
      for (std::size_t k = 0; k < i; ++k) acc += c * factor() * xt[k];
      const ExtScalar diag = ExtScalar(sys.d[i]) * factor();
      const ExtScalar rhs_factor = factor();
      const ExtScalar rhs = target == PerturbTarget::MatrixAndRhs ? c * rhs_factor : c;
      xt[i] = (rhs + acc) / diag;
      const ExtScalar diff = (xt[i] - x[i]).abs();
      if (diff > err) err = diff;
    }
    if (err > worst) worst = err;
  }
  const ExtScalar denom = ExtScalar(epsilon) * x_norm * ExtScalar(stats.kappa_bound);
  stats.max_ratio = (worst / denom).to_native().value_or(0.0);
  return stats;
}

double eigenvalue_sensitivity(const MatrixParams& params, double epsilon) {
  params.validate();
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw std::domain_error("epsilon must be finite and >= 0");
  const ExactParams p = exact_params(params);
  const Rational eps = exact_from_double(epsilon);
  Rational worst(0);
  for (std::size_t j = 1; j <= params.m; ++j) {
    const Rational lambda = p.a + Rational(static_cast<long>(j)) * p.b;
    if (lambda == 0) {
      throw std::domain_error("eigenvalue lambda_" + std::to_string(j) + " is zero; relative shift undefined");
    }
    const Rational perturbed = lambda * (1 + eps);
    const Rational shift = abs(perturbed - lambda) / abs(lambda);
    if (shift > worst) worst = shift;
  }
  return to_double(worst);
}

}  // namespace trieig
