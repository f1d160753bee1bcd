#include "trieig/matgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trieig {
namespace {

void check_eigen_index(const MatrixParams& params, std::size_t j) {
  if (params.b == 0.0) {
    throw std::domain_error("eigenvector subsystem needs b != 0 (distinct eigenvalues)");
  }
  if (j < 1 || j > params.m) {
    throw std::out_of_range("eigen-index " + std::to_string(j) + " outside [1, " +
                            std::to_string(params.m) + "]");
  }
}

template <class T>
BasicTriMatrix<T> assemble_A(std::size_t m, const T& a, const T& b, const T& c, Shape shape) {
  BasicTriMatrix<T> lower(m, Shape::Lower);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) lower.at(i, j) = T(T(0) - c);  // +0, not -0, when c == 0
    lower.at(i, i) = a + T(static_cast<long>(i + 1)) * b;
  }
  return shape == Shape::Lower ? lower : flip(lower);
}

}  // namespace

void MatrixParams::validate() const {
  if (m < 1) throw std::invalid_argument("dimension m must be at least 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw std::invalid_argument("parameters a, b, c must be finite");
  }
}

GammaRatio GammaRatio::exact(Rational gamma) {
  GammaRatio g;
  gamma.canonicalize();
  g.kind_ = Kind::ExactRational;
  g.value_ = to_ext(gamma).to_native().value_or(sgn(gamma) * HUGE_VAL);
  g.exact_ = std::move(gamma);
  return g;
}

GammaRatio GammaRatio::approximate(double gamma) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  GammaRatio g;
  g.kind_ = Kind::Float;
  g.value_ = gamma;
  return g;
}

GammaRatio GammaRatio::from_params(const MatrixParams& params) {
  if (params.b == 0.0) throw std::domain_error("gamma = c/b needs b != 0");
  const auto b = recover_small_rational(params.b);
  const auto c = recover_small_rational(params.c);
  if (b && c) return exact(*c / *b);
  return approximate(params.c / params.b);
}

const Rational& GammaRatio::exact_value() const {
  if (kind_ != Kind::ExactRational) throw std::logic_error("gamma is not an exact rational");
  return exact_;
}

ExactSystem to_exact(const GeneralSystem& sys) {
  ExactSystem out;
  out.d.reserve(sys.size());
  for (double v : sys.d) out.d.push_back(exact_from_double(v));
  out.c = exact_from_double(sys.c);
  return out;
}

ExtSystem to_ext(const GeneralSystem& sys) {
  ExtSystem out;
  out.d.reserve(sys.size());
  for (double v : sys.d) out.d.emplace_back(v);
  out.c = ExtScalar(sys.c);
  return out;
}

TriMatrix build_A(const MatrixParams& params) {
  params.validate();
  return assemble_A<double>(params.m, params.a, params.b, params.c, params.orientation);
}

GeneralSystem build_eigvec_subsystem(const MatrixParams& params, std::size_t j) {
  params.validate();
  check_eigen_index(params, j);
  GeneralSystem sys;
  sys.c = params.c;
  for (std::size_t i = 1; i <= params.m - j; ++i) sys.d.push_back(static_cast<double>(i) * params.b);
  return sys;
}

ExactParams exact_params(const MatrixParams& params) {
  params.validate();
  return {recover_or_exact(params.a), recover_or_exact(params.b), recover_or_exact(params.c)};
}

BasicTriMatrix<Rational> build_A_exact(const MatrixParams& params) {
  const ExactParams p = exact_params(params);
  return assemble_A<Rational>(params.m, p.a, p.b, p.c, params.orientation);
}

ExactSystem build_eigvec_subsystem_exact(const MatrixParams& params, std::size_t j) {
  check_eigen_index(params, j);
  const ExactParams p = exact_params(params);
  ExactSystem sys;
  sys.c = p.c;
  for (std::size_t i = 1; i <= params.m - j; ++i) sys.d.push_back(Rational(static_cast<long>(i)) * p.b);
  return sys;
}

}  // namespace trieig
