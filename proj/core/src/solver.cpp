#include "trieig/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace trieig {
namespace {

constexpr double kOmega = std::numeric_limits<double>::max();

// Lower clamp on log2(tau). Pathological |c| / min|d| ratios would otherwise
// push tau below 1 and flush every component; the per-step growth check
// already guarantees headroom at any positive threshold.
constexpr double kMinThresholdLog2 = 64.0;

void require_nonsingular(const GeneralSystem& sys) {
  for (double d : sys.d) {
    if (d == 0.0) throw std::domain_error("singular system: zero diagonal entry");
  }
}

// log2|v| for finite nonzero v without overflow.
double log2_abs(double v) {
  int e = 0;
  const double f = std::frexp(std::fabs(v), &e);
  return static_cast<double>(e) + std::log2(f);
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::Naive:
      return "naive";
    case Method::Robust:
      return "robust";
    case Method::Extended:
      return "extended";
  }
  return "?";
}

SolveOutcome naive_solve(const GeneralSystem& sys) {
  require_nonsingular(sys);
  SolveOutcome out;
  out.result.values.reserve(sys.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const double a = sys.c / sys.d[k];
    const double x = a * (1.0 + sum);
    sum += x;
    if (!std::isfinite(a) || !std::isfinite(x) || !std::isfinite(sum) || std::fabs(x) > kOmega) {
      out.status = SolveStatus::OverflowDetected;
      out.overflow_index = k + 1;
      out.result.values.clear();
      return out;
    }
    out.result.values.push_back(x);
  }
  return out;
}

double robust_threshold_log2(const GeneralSystem& sys) {
  const double n = static_cast<double>(std::max<std::size_t>(sys.size(), 1));
  double growth_log2 = 0.0;
  if (sys.c != 0.0 && !sys.d.empty()) {
    double min_d = std::fabs(sys.d.front());
    for (double d : sys.d) min_d = std::min(min_d, std::fabs(d));
    growth_log2 = std::max(0.0, log2_abs(sys.c) - log2_abs(min_d));
  }
  const double tau = std::log2(kOmega) - std::log2(2.0 * n) - growth_log2;
  return std::max(tau, kMinThresholdLog2);
}

namespace {

constexpr std::int64_t kMinNormalExp = std::numeric_limits<double>::min_exponent - 1;

// Values below the subnormal range flush to a signed zero.
double flush_to_double(const ExtScalar& v) {
  if (const auto d = v.to_native()) return *d;
  if (v.exponent() < 0) return v.sign() < 0 ? -0.0 : 0.0;
  throw std::overflow_error("robust update outside double range");
}

}  // namespace

ScaledVector robust_solve(const GeneralSystem& sys, const RobustObserver& observer) {
  require_nonsingular(sys);
  const double tau_log2 = robust_threshold_log2(sys);
  int c_exp = 0;
  const double c_frac = std::frexp(sys.c, &c_exp);

  ScaledVector out;
  out.values.reserve(sys.size());
  double rhs = 1.0;  // the right-hand side factor 1, in the scaled domain
  double sum = 0.0;
  double partial_max = 0.0;
  std::vector<std::int64_t> written_at;  // scale_exp in force when values[k] was formed
  written_at.reserve(sys.size());
  for (std::size_t k = 0; k < sys.size(); ++k) {
    int d_exp = 0;
    const double d_frac = std::frexp(sys.d[k], &d_exp);
    // a_k = ratio * 2^a_exp, always representable even when c / d_k is not.
    const double ratio = c_frac / d_frac;
    const int a_exp = c_exp - d_exp;
    const double a_native = sys.c / sys.d[k];
    const bool native_ok =
        std::isfinite(a_native) &&
        (a_native == 0.0 ? sys.c == 0.0 : std::fabs(a_native) >= std::numeric_limits<double>::min());

    const double headroom = std::fabs(rhs) + std::fabs(sum);
    if (sys.c != 0.0 && headroom > 0.0) {
      // |x_k| <= |a| t and |sum + x_k| <= (1 + |a|) t <= 2 max(1, |a|) t.
      const double a_log2 = static_cast<double>(a_exp) + std::log2(std::fabs(ratio));
      const double predicted = log2_abs(headroom) + std::max(a_log2, 0.0) + 1.0;
      if (predicted > tau_log2) {
        const auto sigma = static_cast<int>(std::ceil(predicted - tau_log2));
        sum = std::ldexp(sum, -sigma);
        partial_max = std::ldexp(partial_max, -sigma);
        out.scale_exp -= sigma;
        rhs = out.scale_exp < std::numeric_limits<int>::min() / 2
                  ? 0.0
                  : std::ldexp(1.0, static_cast<int>(out.scale_exp));
      }
    }
    double x;
    if (native_ok && out.scale_exp >= kMinNormalExp) {
      x = a_native * (rhs + sum);
    } else {
      // 2^scale_exp is not a normal double; form the update in ExtScalar.
      const ExtScalar t = ExtScalar::pow2(out.scale_exp) + ExtScalar(sum);
      x = flush_to_double(ExtScalar(ratio).ldexp(a_exp) * t);
    }
    sum += x;
    out.values.push_back(x);
    written_at.push_back(out.scale_exp);
    partial_max = std::max(partial_max, std::fabs(x));
    if (observer) observer(RobustStep{k + 1, x, sum, rhs, out.scale_exp, partial_max});
  }
  // Rescaling is applied lazily: each component takes the accumulated factor
  // once, which costs O(n) and rounds at most once.
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const std::int64_t shift = out.scale_exp - written_at[k];
    if (shift == 0) continue;
    out.values[k] = shift < -4096 ? std::copysign(0.0, out.values[k])
                                  : std::ldexp(out.values[k], static_cast<int>(shift));
  }
  return out;
}

std::vector<ExtScalar> ext_solve(const GeneralSystem& sys) {
  require_nonsingular(sys);
  const ExtScalar c(sys.c);
  const ExtScalar one(1.0);
  std::vector<ExtScalar> x;
  x.reserve(sys.size());
  ExtScalar sum;
  for (double d : sys.d) {
    x.push_back(c / ExtScalar(d) * (one + sum));
    sum += x.back();
  }
  return x;
}

double EigenvectorColumn::max_log2() const {
  double best = -std::numeric_limits<double>::infinity();
  if (status != SolveStatus::Ok) return best;
  for (std::size_t i = 0; i < size(); ++i) best = std::max(best, component(i).log2_abs());
  return best;
}

ExtScalar EigenvectorColumn::component(std::size_t i) const {
  if (const auto* sv = std::get_if<ScaledVector>(&vector)) return sv->component(i);
  return std::get<std::vector<ExtScalar>>(vector).at(i);
}

std::size_t EigenvectorColumn::size() const {
  if (const auto* sv = std::get_if<ScaledVector>(&vector)) return sv->size();
  return std::get<std::vector<ExtScalar>>(vector).size();
}

EigenvectorColumn eigenvector(const MatrixParams& params, Method method, std::size_t j) {
  const GeneralSystem sys = build_eigvec_subsystem(params, j);
  const std::size_t m = params.m;
  const bool upper = params.orientation == Shape::Upper;
  const auto place = [&](auto full) {
    if (upper) std::reverse(full.begin(), full.end());
    return full;
  };

  EigenvectorColumn col;
  col.eigen_index = j;
  col.lambda = params.a + static_cast<double>(j) * params.b;

  switch (method) {
    case Method::Naive: {
      const SolveOutcome outcome = naive_solve(sys);
      if (outcome.status == SolveStatus::OverflowDetected) {
        const std::size_t row = j + *outcome.overflow_index;
        col.status = SolveStatus::OverflowDetected;
        col.overflow_row = upper ? m + 1 - row : row;
        col.vector = ScaledVector{};
        return col;
      }
      std::vector<double> full(m, 0.0);
      full[j - 1] = 1.0;
      std::copy(outcome.result.values.begin(), outcome.result.values.end(), full.begin() + j);
      col.vector = ScaledVector{place(std::move(full)), 0};
      return col;
    }
    case Method::Robust: {
      const ScaledVector tail = robust_solve(sys);
      std::vector<double> full(m, 0.0);
      full[j - 1] = tail.scale_exp < std::numeric_limits<int>::min() / 2
                        ? 0.0
                        : std::ldexp(1.0, static_cast<int>(tail.scale_exp));
      std::copy(tail.values.begin(), tail.values.end(), full.begin() + j);
      col.vector = ScaledVector{place(std::move(full)), tail.scale_exp};
      return col;
    }
    case Method::Extended: {
      const std::vector<ExtScalar> tail = ext_solve(sys);
      std::vector<ExtScalar> full(m);
      full[j - 1] = ExtScalar(1.0);
      std::copy(tail.begin(), tail.end(), full.begin() + j);
      col.vector = place(std::move(full));
      return col;
    }
  }
  throw std::invalid_argument("unknown method");
}

std::vector<EigenvectorColumn> eigenvectors(const MatrixParams& params, Method method,
                                            unsigned threads) {
  params.validate();
  if (params.b == 0.0) throw std::domain_error("eigenvectors need b != 0");
  const std::size_t m = params.m;
  std::vector<EigenvectorColumn> cols(m);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
  if (threads == 1) {
    for (std::size_t j = 1; j <= m; ++j) cols[j - 1] = eigenvector(params, method, j);
    return cols;
  }
  std::atomic<std::size_t> next{1};
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t j = next++; j <= m; j = next++) cols[j - 1] = eigenvector(params, method, j);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return cols;
}

namespace {

double y_max_of(const std::vector<double>& y) {
  double best = 0.0;
  for (double v : y) best = std::max(best, std::fabs(v));
  return best;
}

// Fallback when the double evaluation below leaves the finite range.
ExtScalar residual_ext(const TriMatrix& a, double lambda, const std::vector<ExtScalar>& x) {
  const std::size_t n = x.size();
  ExtScalar x_max;
  for (const ExtScalar& v : x) {
    if (cmp_abs(v, x_max) > 0) x_max = v.abs();
  }
  const ExtScalar lam(lambda);
  const bool lower = a.shape() == Shape::Lower;
  ExtScalar a_norm;
  ExtScalar r_max;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = lower ? 0 : i;
    const std::size_t hi = lower ? i : n - 1;
    ExtScalar row_abs;
    ExtScalar r = -(lam * x[i]);
    for (std::size_t k = lo; k <= hi; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      row_abs += ExtScalar(std::fabs(aik));
      if (!x[k].is_zero()) r += ExtScalar(aik) * x[k];
    }
    if (cmp_abs(row_abs, a_norm) > 0) a_norm = row_abs;
    if (cmp_abs(r, r_max) > 0) r_max = r.abs();
  }
  return r_max / ((a_norm + lam.abs()) * x_max);
}

// The vector is brought to a common power of two with max|x| in [1, 2), so the
// product (A - lambda I) x runs in doubles. The ratio is scale invariant.
template <class Component>
ExtScalar residual_impl(const TriMatrix& a, double lambda, std::size_t n, Component&& x_at) {
  if (a.size() != n) throw std::invalid_argument("residual: dimension mismatch");
  std::vector<ExtScalar> x(n);
  ExtScalar x_max;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x_at(i);
    if (cmp_abs(x[i], x_max) > 0) x_max = x[i].abs();
  }
  if (x_max.is_zero()) throw std::invalid_argument("residual: zero vector is not an eigenvector");

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ExtScalar v = x[i].ldexp(-x_max.exponent());
    y[i] = v.exponent() < -1100 ? 0.0 : std::ldexp(v.sign() * v.significand(), static_cast<int>(v.exponent()));
  }
  std::size_t first = n, last = 0;  // support of y
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0.0) {
      first = std::min(first, i);
      last = i;
    }
  }
  const bool lower = a.shape() == Shape::Lower;
  double a_norm = 0.0;
  double r_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = lower ? 0 : i;
    const std::size_t hi = lower ? i : n - 1;
    const double* row = &a(i, 0);
    double row_abs = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) row_abs += std::fabs(row[k]);
    double r = -lambda * y[i];
    for (std::size_t k = std::max(lo, first); k <= std::min(hi, last); ++k) r += row[k] * y[k];
    a_norm = std::max(a_norm, row_abs);
    r_max = std::max(r_max, std::fabs(r));
  }
  const double denom = a_norm + std::fabs(lambda);
  if (!std::isfinite(r_max) || !std::isfinite(denom)) return residual_ext(a, lambda, x);
  return ExtScalar(r_max) / (ExtScalar(denom) * ExtScalar(y_max_of(y)));
}

}  // namespace

ExtScalar residual(const TriMatrix& a, double lambda, const ScaledVector& x) {
  return residual_impl(a, lambda, x.size(), [&](std::size_t i) { return x.component(i); });
}

ExtScalar residual(const TriMatrix& a, double lambda, const std::vector<ExtScalar>& x) {
  return residual_impl(a, lambda, x.size(), [&](std::size_t i) { return x[i]; });
}

}  // namespace trieig
