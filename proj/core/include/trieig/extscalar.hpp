#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace trieig {

/// A binary floating-point value with a native-double significand and a
/// 64-bit exponent: sign * significand * 2^exponent, significand in [1, 2).
///
/// The exponent range is wide enough that eigenvector components of any
/// matrix we can store still have a finite representation. Arithmetic rounds
/// the significand to nearest (the native rounding of the underlying double
/// operation); the exponent is exact. Exponent overflow of the int64 throws
/// std::overflow_error instead of wrapping.
class ExtScalar {
 public:
  /// Zero.
  constexpr ExtScalar() = default;

  /// Same as normalize(v).
  explicit ExtScalar(double v);

  /// Exact decomposition of a finite double. Throws std::invalid_argument for
  /// NaN or infinity.
  static ExtScalar normalize(double v);

  /// Builds from explicit parts; the significand must already be in [1, 2)
  /// unless sign == 0.
  static ExtScalar from_parts(int sign, double significand, std::int64_t exponent);

  static ExtScalar pow2(std::int64_t e) { return from_parts(1, 1.0, e); }

  int sign() const { return sign_; }
  double significand() const { return significand_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_zero() const { return sign_ == 0; }

  /// Multiplication by 2^k; exact.
  ExtScalar ldexp(std::int64_t k) const;

  ExtScalar abs() const;
  ExtScalar operator-() const;

  friend ExtScalar operator*(const ExtScalar& x, const ExtScalar& y);
  friend ExtScalar operator/(const ExtScalar& x, const ExtScalar& y);
  friend ExtScalar operator+(const ExtScalar& x, const ExtScalar& y);
  friend ExtScalar operator-(const ExtScalar& x, const ExtScalar& y) { return x + (-y); }

  ExtScalar& operator*=(const ExtScalar& y) { return *this = *this * y; }
  ExtScalar& operator/=(const ExtScalar& y) { return *this = *this / y; }
  ExtScalar& operator+=(const ExtScalar& y) { return *this = *this + y; }
  ExtScalar& operator-=(const ExtScalar& y) { return *this = *this - y; }

  /// Canonical form makes field equality value equality.
  friend bool operator==(const ExtScalar& x, const ExtScalar& y);
  friend std::strong_ordering operator<=>(const ExtScalar& x, const ExtScalar& y);

  /// The value as a double, or std::nullopt (OutOfRange) when the magnitude
  /// overflows the double range or a nonzero value would round to zero.
  std::optional<double> to_native() const;

  /// exponent + log2(significand); -infinity for zero.
  double log2_abs() const;

  /// "+1.5*2^-1" form; "0" for zero. The significand is printed with 17
  /// significant digits, so parse(to_string(x)) == x.
  std::string to_string() const;

  /// Decimal scientific "m×10^d" rendering for reports (about 15 digits).
  std::string to_decimal_string() const;

  /// Parses the to_string() form. Throws std::invalid_argument.
  static ExtScalar parse(std::string_view text);

 private:
  constexpr ExtScalar(int sign, double significand, std::int64_t exponent)
      : sign_(sign), significand_(significand), exponent_(exponent) {}

  // Normalizes a finite nonzero double r and adds extra to its exponent.
  static ExtScalar renormalize(double r, std::int64_t extra);

  int sign_ = 0;
  double significand_ = 0.0;
  std::int64_t exponent_ = 0;
};

/// Exact comparison of |x| and |y|.
std::strong_ordering cmp_abs(const ExtScalar& x, const ExtScalar& y);

inline ExtScalar abs(const ExtScalar& x) { return x.abs(); }

}  // namespace trieig
