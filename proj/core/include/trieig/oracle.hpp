#pragma once

// Closed-form solutions for the special lower-triangular systems
//
//   d_1                 x_1     c
//   -c  d_2             x_2     c
//   ..       ..       * ..   =  ..
//   -c  ..   -c  d_n    x_n     c
//
// and for the eigenvectors of the generated matrices. Every template works
// for T = Rational (exact) and T = ExtScalar (wide exponent).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "trieig/extscalar.hpp"
#include "trieig/matgen.hpp"
#include "trieig/matrix.hpp"
#include "trieig/rational.hpp"

namespace trieig {

/// a_k = c / d_k and omega_k = prod_{j<k} (1 + a_j), 0-based:
/// a[k] = a_{k+1}, omega[k] = omega_{k+1}. omega has n + 1 entries so that
/// omega_{n+1} is available.
template <class T>
struct OmegaSequence {
  std::vector<T> a;
  std::vector<T> omega;
};

template <class T>
void require_nonsingular(const BasicSystem<T>& sys) {
  for (const T& d : sys.d) {
    if (d == T(0)) throw std::domain_error("singular system: zero diagonal entry");
  }
}

template <class T>
OmegaSequence<T> omega_sequence(const BasicSystem<T>& sys) {
  require_nonsingular(sys);
  const std::size_t n = sys.size();
  OmegaSequence<T> seq;
  seq.a.reserve(n);
  seq.omega.reserve(n + 1);
  seq.omega.push_back(T(1));
  for (std::size_t k = 0; k < n; ++k) {
    seq.a.push_back(T(sys.c / sys.d[k]));
    seq.omega.push_back(T((T(1) + seq.a[k]) * seq.omega[k]));
  }
  return seq;
}

/// x_k = a_k * omega_k.
template <class T>
std::vector<T> solve_closed_form(const BasicSystem<T>& sys) {
  const auto seq = omega_sequence(sys);
  std::vector<T> x;
  x.reserve(sys.size());
  for (std::size_t k = 0; k < sys.size(); ++k) x.push_back(T(seq.a[k] * seq.omega[k]));
  return x;
}

/// Forward substitution x_k = a_k (1 + sum_{j<k} x_j) in T arithmetic.
template <class T>
std::vector<T> substitute(const BasicSystem<T>& sys) {
  require_nonsingular(sys);
  std::vector<T> x;
  x.reserve(sys.size());
  T sum(0);
  for (std::size_t k = 0; k < sys.size(); ++k) {
    x.push_back(T(sys.c / sys.d[k] * (T(1) + sum)));
    sum += x.back();
  }
  return x;
}

/// H = G^{-1}: h_ii = 1/d_i, h_ij = (a_i / d_j)(omega_i / omega_{j+1}) below
/// the diagonal. When some omega_{j+1} vanishes the ratio is replaced by the
/// equal partial product prod_{k=j+1}^{i-1} (1 + a_k).
template <class T>
BasicTriMatrix<T> inverse_closed_form(const BasicSystem<T>& sys) {
  const auto seq = omega_sequence(sys);
  const std::size_t n = sys.size();
  BasicTriMatrix<T> h(n, Shape::Lower);
  for (std::size_t j = 0; j < n; ++j) {
    h.at(j, j) = T(T(1) / sys.d[j]);
    const T& omega_next = seq.omega[j + 1];
    if (!(omega_next == T(0))) {
      const T scale(T(1) / (sys.d[j] * omega_next));
      for (std::size_t i = j + 1; i < n; ++i) h.at(i, j) = T(seq.a[i] * seq.omega[i] * scale);
    } else {
      T partial(1);
      for (std::size_t i = j + 1; i < n; ++i) {
        if (i > j + 1) partial *= T(T(1) + seq.a[i - 1]);
        h.at(i, j) = T(seq.a[i] / sys.d[j] * partial);
      }
    }
  }
  return h;
}

/// y = |G||x| and skeelZ = |G^{-1}| y for systems with d_j > 0, c > 0:
/// y_i = c (2 omega_i - 1),
/// skeelZ_i = a_i (2 omega_i - 1) + sum_{j<i} a_i a_j (omega_i / omega_{j+1}) (2 omega_j - 1).
template <class T>
struct SkeelVectors {
  std::vector<T> y;
  std::vector<T> skeel_z;
};

template <class T>
SkeelVectors<T> skeel_vectors(const BasicSystem<T>& sys) {
  if (!(sys.c > T(0))) throw std::domain_error("skeel_vectors needs c > 0");
  for (const T& d : sys.d) {
    if (!(d > T(0))) throw std::domain_error("skeel_vectors needs every d_j > 0");
  }
  const auto seq = omega_sequence(sys);
  const std::size_t n = sys.size();
  SkeelVectors<T> out;
  out.y.reserve(n);
  out.skeel_z.reserve(n);
  // The inner sum factors as a_i omega_i * sum_{j<i} a_j (2 omega_j - 1) / omega_{j+1}.
  T tail(0);
  for (std::size_t i = 0; i < n; ++i) {
    const T twice_minus_one(T(2) * seq.omega[i] - T(1));
    out.y.push_back(T(sys.c * twice_minus_one));
    out.skeel_z.push_back(T(seq.a[i] * twice_minus_one + seq.a[i] * seq.omega[i] * tail));
    tail += T(seq.a[i] * twice_minus_one / seq.omega[i + 1]);
  }
  return out;
}

/// binom(x, k) = x (x-1) ... (x-k+1) / k!, the falling-factorial definition,
/// valid for any real x.
template <class T>
T binomial(const T& x, std::size_t k) {
  T num(1);
  T den(1);
  for (std::size_t i = 0; i < k; ++i) {
    num *= T(x - T(static_cast<long>(i)));
    den *= T(static_cast<long>(i + 1));
  }
  return T(num / den);
}

/// z_k = binom(gamma + k - 1, k) for k = 0..kmax.
class GrowthSequence {
 public:
  explicit GrowthSequence(std::vector<Rational> exact) : values_(std::move(exact)) {}
  explicit GrowthSequence(std::vector<ExtScalar> ext) : values_(std::move(ext)) {}

  bool is_exact() const { return std::holds_alternative<std::vector<Rational>>(values_); }
  std::size_t size() const;

  /// Throws std::logic_error in ExtScalar mode.
  const std::vector<Rational>& exact() const;

  /// z_k as ExtScalar (rounded from the exact value when exact).
  ExtScalar ext(std::size_t k) const;
  double log2_abs(std::size_t k) const { return ext(k).log2_abs(); }

  /// "n/d" in exact mode, "+s*2^e" otherwise.
  std::string text(std::size_t k) const;

 private:
  std::variant<std::vector<Rational>, std::vector<ExtScalar>> values_;
};

/// Product recurrence z_{k+1} = z_k (gamma + k) / (k + 1), z_0 = 1.
GrowthSequence growth_sequence(const GammaRatio& gamma, std::size_t kmax);

/// lambda_j = a + j b, j = 1..m.
std::vector<double> eigenvalues(const MatrixParams& params);

/// Eigenvalues and the eigenvector matrix X: x_ij = z_{i-j} for i >= j in the
/// lower orientation, J X J in the upper one. Column c of X (0-based) belongs
/// to the diagonal entry (c, c) of the matrix in the same orientation.
class EigenDecomposition {
 public:
  EigenDecomposition(MatrixParams params, GrowthSequence z);

  const MatrixParams& params() const { return params_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const GrowthSequence& growth() const { return z_; }
  bool is_exact() const { return z_.is_exact(); }

  /// Distance from the diagonal into the triangle, or nullopt outside it.
  std::optional<std::size_t> offset(std::size_t row, std::size_t col) const;

  ExtScalar entry_ext(std::size_t row, std::size_t col) const;
  Rational entry_exact(std::size_t row, std::size_t col) const;

  BasicTriMatrix<Rational> dense_exact() const;
  BasicTriMatrix<ExtScalar> dense_ext() const;
  /// Throws std::range_error when an entry does not fit a double.
  TriMatrix dense_native() const;

 private:
  MatrixParams params_;
  GrowthSequence z_;
  std::vector<double> lambdas_;
};

/// Throws std::domain_error for b == 0.
EigenDecomposition eigenvector_matrix(const MatrixParams& params);

enum class Asymptotics { Diverges, ConstantOne, EventuallyZero, TendsToZeroSublinearly };

/// Behaviour of y_k = binom(alpha + k, k) as k grows. Eigenvector growth
/// corresponds to alpha = gamma - 1.
Asymptotics classify_asymptotics(double alpha);

const char* to_string(Asymptotics a);

struct GrowthWitness {
  std::size_t row = 0;  // 1-based
  std::size_t col = 0;  // 1-based
  std::string value;
  double value_log2 = 0.0;
};

struct GrowthFloorReport {
  bool pass = true;
  bool exact = true;
  /// gamma >= m, the regime where the floor is guaranteed.
  bool guaranteed = false;
  std::size_t entries_checked = 0;
  std::optional<GrowthWitness> first_violation;
};

/// Checks x_ij >= 2^{i-j} over the whole lower triangle of X (1-based
/// indices in the report, lower orientation).
GrowthFloorReport growth_floor_check(const MatrixParams& params);

}  // namespace trieig
