#include "trieig/oracle.hpp"

#include <cmath>

namespace trieig {

std::size_t GrowthSequence::size() const {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

const std::vector<Rational>& GrowthSequence::exact() const {
  if (!is_exact()) throw std::logic_error("growth sequence is not exact");
  return std::get<std::vector<Rational>>(values_);
}

ExtScalar GrowthSequence::ext(std::size_t k) const {
  if (is_exact()) return to_ext(std::get<std::vector<Rational>>(values_).at(k));
  return std::get<std::vector<ExtScalar>>(values_).at(k);
}

std::string GrowthSequence::text(std::size_t k) const {
  if (is_exact()) return to_string(std::get<std::vector<Rational>>(values_).at(k));
  return std::get<std::vector<ExtScalar>>(values_).at(k).to_string();
}

GrowthSequence growth_sequence(const GammaRatio& gamma, std::size_t kmax) {
  if (gamma.is_exact()) {
    const Rational& g = gamma.exact_value();
    std::vector<Rational> z;
    z.reserve(kmax + 1);
    z.emplace_back(1);
    for (std::size_t k = 0; k < kmax; ++k) {
      const long kk = static_cast<long>(k);
      z.push_back(Rational(z.back() * (g + kk) / (kk + 1)));
    }
    return GrowthSequence(std::move(z));
  }
  const double g = gamma.value();
  std::vector<ExtScalar> z;
  z.reserve(kmax + 1);
  z.emplace_back(1.0);
  for (std::size_t k = 0; k < kmax; ++k) {
    const double kk = static_cast<double>(k);
    z.push_back(z.back() * ExtScalar(g + kk) / ExtScalar(kk + 1.0));
  }
  return GrowthSequence(std::move(z));
}

std::vector<double> eigenvalues(const MatrixParams& params) {
  params.validate();
  std::vector<double> out;
  out.reserve(params.m);
  for (std::size_t j = 1; j <= params.m; ++j) out.push_back(params.a + static_cast<double>(j) * params.b);
  return out;
}

EigenDecomposition::EigenDecomposition(MatrixParams params, GrowthSequence z)
    : params_(params), z_(std::move(z)), lambdas_(eigenvalues(params_)) {
  if (z_.size() < params_.m) throw std::invalid_argument("growth sequence shorter than m");
}

std::optional<std::size_t> EigenDecomposition::offset(std::size_t row, std::size_t col) const {
  const std::size_t m = params_.m;
  if (row >= m || col >= m) throw std::out_of_range("EigenDecomposition: index out of range");
  if (params_.orientation == Shape::Lower) {
    if (row < col) return std::nullopt;
    return row - col;
  }
  if (col < row) return std::nullopt;
  return col - row;
}

ExtScalar EigenDecomposition::entry_ext(std::size_t row, std::size_t col) const {
  const auto k = offset(row, col);
  return k ? z_.ext(*k) : ExtScalar();
}

Rational EigenDecomposition::entry_exact(std::size_t row, std::size_t col) const {
  const auto k = offset(row, col);
  return k ? z_.exact().at(*k) : Rational(0);
}

BasicTriMatrix<Rational> EigenDecomposition::dense_exact() const {
  const std::size_t m = params_.m;
  BasicTriMatrix<Rational> x(m, params_.orientation);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (offset(i, j)) x.at(i, j) = entry_exact(i, j);
    }
  }
  return x;
}

BasicTriMatrix<ExtScalar> EigenDecomposition::dense_ext() const {
  const std::size_t m = params_.m;
  BasicTriMatrix<ExtScalar> x(m, params_.orientation);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (offset(i, j)) x.at(i, j) = entry_ext(i, j);
    }
  }
  return x;
}

TriMatrix EigenDecomposition::dense_native() const {
  const std::size_t m = params_.m;
  std::vector<double> native(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto v = z_.ext(k).to_native();
    if (!v) throw std::range_error("eigenvector entry z_" + std::to_string(k) + " exceeds double range");
    native[k] = *v;
  }
  TriMatrix x(m, params_.orientation);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (const auto k = offset(i, j)) x.at(i, j) = native[*k];
    }
  }
  return x;
}

EigenDecomposition eigenvector_matrix(const MatrixParams& params) {
  params.validate();
  const GammaRatio gamma = GammaRatio::from_params(params);
  return EigenDecomposition(params, growth_sequence(gamma, params.m - 1));
}

Asymptotics classify_asymptotics(double alpha) {
  if (alpha > 0.0) return Asymptotics::Diverges;
  if (alpha == 0.0) return Asymptotics::ConstantOne;
  if (alpha == std::floor(alpha)) return Asymptotics::EventuallyZero;
  return Asymptotics::TendsToZeroSublinearly;
}

const char* to_string(Asymptotics a) {
  switch (a) {
    case Asymptotics::Diverges:
      return "Diverges";
    case Asymptotics::ConstantOne:
      return "ConstantOne";
    case Asymptotics::EventuallyZero:
      return "EventuallyZero";
    case Asymptotics::TendsToZeroSublinearly:
      return "TendsToZeroSublinearly";
  }
  return "?";
}

GrowthFloorReport growth_floor_check(const MatrixParams& params) {
  params.validate();
  MatrixParams lower = params;
  lower.orientation = Shape::Lower;
  const EigenDecomposition eig = eigenvector_matrix(lower);
  const GammaRatio gamma = GammaRatio::from_params(params);
  const std::size_t m = params.m;

  GrowthFloorReport report;
  report.exact = eig.is_exact();
  report.guaranteed = gamma.is_exact() ? gamma.exact_value() >= static_cast<long>(m)
                                       : gamma.value() >= static_cast<double>(m);

  // Floors 2^k, one per subdiagonal.
  std::vector<mpz_class> floor_exact;
  if (report.exact) {
    floor_exact.reserve(m);
    for (std::size_t k = 0; k < m; ++k) floor_exact.push_back(mpz_class(1) << static_cast<mp_bitcnt_t>(k));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t k = i - j;
      bool ok;
      if (report.exact) {
        ok = eig.growth().exact()[k] >= Rational(floor_exact[k]);
      } else {
        ok = eig.entry_ext(i, j) >= ExtScalar::pow2(static_cast<std::int64_t>(k));
      }
      ++report.entries_checked;
      if (!ok && !report.first_violation) {
        report.pass = false;
        report.first_violation =
            GrowthWitness{i + 1, j + 1, eig.growth().text(k), eig.growth().log2_abs(k)};
      }
    }
  }
  return report;
}

}  // namespace trieig
