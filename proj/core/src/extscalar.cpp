#include "trieig/extscalar.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace trieig {
namespace {

constexpr std::uint64_t kExponentMask = 0x7ff0000000000000ULL;
constexpr std::uint64_t kMantissaMask = 0x000fffffffffffffULL;
constexpr std::uint64_t kOneBits = 0x3ff0000000000000ULL;
constexpr std::uint64_t kSignMask = 0x8000000000000000ULL;

// Beyond this exponent gap the smaller addend cannot affect the rounded sum.
constexpr std::int64_t kAlignLimit = 64;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("ExtScalar exponent overflow");
  }
  return r;
}

// 2^-k for 0 <= k <= kAlignLimit, always a normal double.
double pow2_neg(std::int64_t k) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(1023 - k) << 52);
}

}  // namespace

ExtScalar::ExtScalar(double v) : ExtScalar(normalize(v)) {}

ExtScalar ExtScalar::renormalize(double r, std::int64_t extra) {
  const auto bits = std::bit_cast<std::uint64_t>(r);
  const int sign = (bits & kSignMask) ? -1 : 1;
  const auto biased = static_cast<std::int64_t>((bits & kExponentMask) >> 52);
  if (biased == 0) {
    // Subnormal input; only reachable from normalize().
    int e = 0;
    const double f = std::frexp(std::fabs(r), &e);
    return ExtScalar(sign, 2.0 * f, checked_add(extra, e - 1));
  }
  const double sig = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);
  return ExtScalar(sign, sig, checked_add(extra, biased - 1023));
}

ExtScalar ExtScalar::normalize(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("ExtScalar::normalize: non-finite input");
  }
  if (v == 0.0) return ExtScalar();
  return renormalize(v, 0);
}

ExtScalar ExtScalar::from_parts(int sign, double significand, std::int64_t exponent) {
  if (sign == 0) return ExtScalar();
  if ((sign != 1 && sign != -1) || !(significand >= 1.0 && significand < 2.0)) {
    throw std::invalid_argument("ExtScalar::from_parts: non-canonical parts");
  }
  return ExtScalar(sign, significand, exponent);
}

ExtScalar ExtScalar::ldexp(std::int64_t k) const {
  if (sign_ == 0) return *this;
  return ExtScalar(sign_, significand_, checked_add(exponent_, k));
}

ExtScalar ExtScalar::abs() const {
  return sign_ == 0 ? *this : ExtScalar(1, significand_, exponent_);
}

ExtScalar ExtScalar::operator-() const {
  return ExtScalar(-sign_, significand_, exponent_);
}

ExtScalar operator*(const ExtScalar& x, const ExtScalar& y) {
  if (x.sign_ == 0 || y.sign_ == 0) return ExtScalar();
  double r = x.significand_ * y.significand_;
  std::int64_t e = checked_add(x.exponent_, y.exponent_);
  if (r >= 2.0) {
    r *= 0.5;
    e = checked_add(e, 1);
  }
  return ExtScalar(x.sign_ * y.sign_, r, e);
}

ExtScalar operator/(const ExtScalar& x, const ExtScalar& y) {
  if (y.sign_ == 0) throw std::domain_error("ExtScalar division by zero");
  if (x.sign_ == 0) return ExtScalar();
  double r = x.significand_ / y.significand_;
  std::int64_t e;
  if (__builtin_sub_overflow(x.exponent_, y.exponent_, &e)) {
    throw std::overflow_error("ExtScalar exponent overflow");
  }
  if (r < 1.0) {
    r *= 2.0;
    e = checked_add(e, -1);
  }
  return ExtScalar(x.sign_ * y.sign_, r, e);
}

ExtScalar operator+(const ExtScalar& x, const ExtScalar& y) {
  if (x.sign_ == 0) return y;
  if (y.sign_ == 0) return x;
  const bool x_big = x.exponent_ >= y.exponent_;
  const ExtScalar& big = x_big ? x : y;
  const ExtScalar& small = x_big ? y : x;
  std::int64_t gap;
  if (__builtin_sub_overflow(big.exponent_, small.exponent_, &gap) || gap > kAlignLimit) {
    return big;
  }
  const double r = big.sign_ * big.significand_ + small.sign_ * small.significand_ * pow2_neg(gap);
  if (r == 0.0) return ExtScalar();
  return ExtScalar::renormalize(r, big.exponent_);
}

bool operator==(const ExtScalar& x, const ExtScalar& y) {
  if (x.sign_ == 0 || y.sign_ == 0) return x.sign_ == y.sign_;
  return x.sign_ == y.sign_ && x.exponent_ == y.exponent_ && x.significand_ == y.significand_;
}

std::strong_ordering cmp_abs(const ExtScalar& x, const ExtScalar& y) {
  if (x.is_zero() || y.is_zero()) return !x.is_zero() <=> !y.is_zero();
  if (x.exponent() != y.exponent()) return x.exponent() <=> y.exponent();
  // Significands are in [1, 2), never NaN.
  if (x.significand() < y.significand()) return std::strong_ordering::less;
  if (x.significand() > y.significand()) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const ExtScalar& x, const ExtScalar& y) {
  if (x.sign_ != y.sign_) return x.sign_ <=> y.sign_;
  const auto mag = cmp_abs(x, y);
  return x.sign_ >= 0 ? mag : 0 <=> mag;
}

std::optional<double> ExtScalar::to_native() const {
  if (sign_ == 0) return 0.0;
  if (exponent_ > std::numeric_limits<double>::max_exponent - 1) return std::nullopt;
  if (exponent_ < -1100) return std::nullopt;
  const double v = std::ldexp(sign_ * significand_, static_cast<int>(exponent_));
  if (v == 0.0) return std::nullopt;
  return v;
}

double ExtScalar::log2_abs() const {
  if (sign_ == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(exponent_) + std::log2(significand_);
}

std::string ExtScalar::to_string() const {
  if (sign_ == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%c%.17g*2^%lld", sign_ < 0 ? '-' : '+', significand_,
                static_cast<long long>(exponent_));
  return buf;
}

std::string ExtScalar::to_decimal_string() const {
  if (sign_ == 0) return "0";
  constexpr double kLog10Of2 = 0.30102999566398119521;
  const double log10v = static_cast<double>(exponent_) * kLog10Of2 + std::log10(significand_);
  double d = std::floor(log10v);
  double mant = std::pow(10.0, log10v - d);
  if (mant >= 10.0) {
    mant /= 10.0;
    d += 1.0;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s%.15g×10^%.0f", sign_ < 0 ? "-" : "", mant, d);
  return buf;
}

ExtScalar ExtScalar::parse(std::string_view text) {
  if (text == "0") return ExtScalar();
  const auto fail = [&] {
    throw std::invalid_argument("ExtScalar::parse: malformed '" + std::string(text) + "'");
  };
  if (text.size() < 2 || (text[0] != '+' && text[0] != '-')) fail();
  const int sign = text[0] == '-' ? -1 : 1;
  const auto star = text.find("*2^");
  if (star == std::string_view::npos) fail();
  const std::string sig_text(text.substr(1, star - 1));
  char* end = nullptr;
  const double sig = std::strtod(sig_text.c_str(), &end);
  if (sig_text.empty() || end != sig_text.c_str() + sig_text.size()) fail();
  const auto exp_text = text.substr(star + 3);
  std::int64_t e = 0;
  const auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), e);
  if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) fail();
  if (!(sig >= 1.0 && sig < 2.0)) fail();
  return ExtScalar(sign, sig, e);
}

}  // namespace trieig
