#pragma once

#include <cstddef>
#include <vector>

#include "trieig/extscalar.hpp"
#include "trieig/matrix.hpp"
#include "trieig/rational.hpp"

namespace trieig {

/// Parameters of the test matrix class: diagonal a + j*b (1-based j), -c on
/// the strict lower triangle. Upper orientation means the flipped matrix.
struct MatrixParams {
  std::size_t m = 1;
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  Shape orientation = Shape::Lower;

  /// Throws std::invalid_argument for m == 0 or non-finite a, b, c.
  void validate() const;
};

/// gamma = c / b, exact when b and c are both small rationals.
class GammaRatio {
 public:
  enum class Kind { ExactRational, Float };

  static GammaRatio exact(Rational gamma);
  static GammaRatio approximate(double gamma);

  /// Throws std::domain_error when b == 0.
  static GammaRatio from_params(const MatrixParams& params);

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::ExactRational; }

  /// Throws std::logic_error for Float.
  const Rational& exact_value() const;

  /// Nearest double (exact case) or the stored float.
  double value() const { return value_; }

 private:
  Kind kind_ = Kind::Float;
  Rational exact_;
  double value_ = 0.0;
};

/// G x = f with G_ii = d_i, G_ij = -c (i > j), f_i = c.
template <class T>
struct BasicSystem {
  std::vector<T> d;
  T c{};

  std::size_t size() const { return d.size(); }
};

using GeneralSystem = BasicSystem<double>;
using ExactSystem = BasicSystem<Rational>;
using ExtSystem = BasicSystem<ExtScalar>;

ExactSystem to_exact(const GeneralSystem& sys);
ExtSystem to_ext(const GeneralSystem& sys);

/// The dense lower-triangular G.
template <class T>
BasicTriMatrix<T> system_matrix(const BasicSystem<T>& sys) {
  const std::size_t n = sys.size();
  BasicTriMatrix<T> g(n, Shape::Lower);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) g.at(i, j) = T(T(0) - sys.c);
    g.at(i, i) = sys.d[i];
  }
  return g;
}

TriMatrix build_A(const MatrixParams& params);

/// System for the tail of eigenvector j (1-based): size m - j, d_i = i*b.
/// j == m gives the empty system. Throws std::domain_error for b == 0 and
/// std::out_of_range for j outside [1, m].
GeneralSystem build_eigvec_subsystem(const MatrixParams& params, std::size_t j);

/// a, b, c as exact rationals (small-rational recovery, else the exact
/// binary value). c / b equals GammaRatio::from_params whenever that is exact.
struct ExactParams {
  Rational a, b, c;
};

ExactParams exact_params(const MatrixParams& params);

BasicTriMatrix<Rational> build_A_exact(const MatrixParams& params);

ExactSystem build_eigvec_subsystem_exact(const MatrixParams& params, std::size_t j);

}  // namespace trieig
