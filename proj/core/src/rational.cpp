#include "trieig/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace trieig {

Rational exact_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("exact_from_double: non-finite input");
  Rational r(v);  // mpq_set_d is exact
  r.canonicalize();
  return r;
}

std::optional<Rational> recover_small_rational(double v, std::int64_t max_denominator) {
  if (!std::isfinite(v)) return std::nullopt;
  const Rational target = exact_from_double(v);
  // Continued-fraction convergents of the exact value; the first one that
  // rounds back to v has the smallest denominator among convergents.
  mpz_class h_prev = 1, h = 0, k_prev = 0, k = 1;
  Rational rest = target;
  for (int step = 0; step < 128; ++step) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    const mpz_class h_next = q * h_prev + h;
    const mpz_class k_next = q * k_prev + k;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;
    if (k_prev > max_denominator) return std::nullopt;
    Rational candidate(h_prev, k_prev);
    candidate.canonicalize();
    if (to_double(candidate) == v) return candidate;
    rest -= q;
    if (rest == 0) return std::nullopt;
    rest = 1 / rest;
  }
  return std::nullopt;
}

Rational recover_or_exact(double v) {
  if (auto r = recover_small_rational(v)) return *r;
  return exact_from_double(v);
}

ExtScalar to_ext(const Rational& r) {
  const int s = sgn(r);
  if (s == 0) return ExtScalar();
  const mpz_class num = abs(r.get_num());
  const mpz_class& den = r.get_den();
  // Scale so the integer quotient has exactly 55 bits: 53 significant, one
  // round bit, one sticky bit.
  std::int64_t shift = 55 - (static_cast<std::int64_t>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                             static_cast<std::int64_t>(mpz_sizeinbase(den.get_mpz_t(), 2)));
  mpz_class q, rem;
  for (;;) {
    mpz_class n = num, d = den;
    if (shift >= 0) {
      n <<= static_cast<mp_bitcnt_t>(shift);
    } else {
      d <<= static_cast<mp_bitcnt_t>(-shift);
    }
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    const auto bits = mpz_sizeinbase(q.get_mpz_t(), 2);
    if (bits == 55) break;
    shift += bits < 55 ? 1 : -1;
  }
  std::uint64_t word = mpz_get_ui(q.get_mpz_t());
  if (rem != 0) word |= 1;
  // The conversion of a 55-bit integer with the sticky bit folded in rounds
  // correctly under the default rounding mode.
  return ExtScalar(static_cast<double>(s) * static_cast<double>(word)).ldexp(-shift);
}

double to_double(const Rational& r) {
  const auto v = to_ext(r).to_native();
  if (!v) throw std::range_error("to_double: rational outside double range");
  return *v;
}

}  // namespace trieig
