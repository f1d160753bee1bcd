#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "trieig/extscalar.hpp"

namespace trieig {

/// Exact rational backed by GMP, always kept in lowest terms.
using Rational = mpq_class;

/// The exact value of a finite double. Throws std::invalid_argument otherwise.
Rational exact_from_double(double v);

/// Finds p/q with q <= max_denominator whose correctly rounded double is
/// exactly v, e.g. 0.1 -> 1/10. Searches the continued-fraction convergents
/// of v; nullopt when none qualifies.
std::optional<Rational> recover_small_rational(double v, std::int64_t max_denominator = 1'000'000);

/// recover_small_rational(v) if it succeeds, else the exact dyadic value of v.
Rational recover_or_exact(double v);

/// Correctly rounded (to nearest, ties to even) conversion.
ExtScalar to_ext(const Rational& r);

/// Correctly rounded; throws std::range_error when out of double range.
double to_double(const Rational& r);

inline double log2_abs(const Rational& r) { return to_ext(r).log2_abs(); }

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace trieig
