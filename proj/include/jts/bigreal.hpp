#pragma once

#include <algorithm>
#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <mpfr.h>

namespace jts {

using Precision = long;

inline constexpr Precision kDefaultPrecisionBits = 256;
inline constexpr Precision kMinPrecisionBits = 64;

// Owning MPFR value. Arithmetic results carry the larger of the operand precisions,
// rounding is always to nearest.
class BigReal {
public:
  BigReal();
  explicit BigReal(long v, Precision bits = kDefaultPrecisionBits);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  ~BigReal();

  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;

  static BigReal from_double(double v, Precision bits = kDefaultPrecisionBits);
  // Accepts the usual decimal forms plus "inf"/"-inf". Throws ParseError.
  static BigReal parse(std::string_view text, Precision bits = kDefaultPrecisionBits);
  static BigReal infinity(int sign = 1, Precision bits = kDefaultPrecisionBits);
  static BigReal pi(Precision bits = kDefaultPrecisionBits);

  // digits == 0 picks the shortest count that reads back to the same value.
  std::string to_string(int digits = 0) const;

  Precision precision() const { return mpfr_get_prec(v_); }
  BigReal with_precision(Precision bits) const;
  double to_double() const;
  long to_long() const;
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  long exponent2() const;  // floor(log2|x|) + 1, 0 for zero

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);

  friend BigReal operator+(const BigReal& a, long b);
  friend BigReal operator+(long a, const BigReal& b) { return b + a; }
  friend BigReal operator-(const BigReal& a, long b);
  friend BigReal operator-(long a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, long b);
  friend BigReal operator/(long a, const BigReal& b);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, long b);

private:
  struct Uninit {};
  BigReal(Precision bits, Uninit);
  mpfr_t v_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log10(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(const BigReal& x, long n);
BigReal ldexp(const BigReal& x, long e);
BigReal asinh(const BigReal& x);
BigReal sinh(const BigReal& x);
BigReal floor(const BigReal& x);
const BigReal& min(const BigReal& a, const BigReal& b);
const BigReal& max(const BigReal& a, const BigReal& b);

// 2^(-p) relative to the given precision.
BigReal epsilon(Precision bits);
// 10^(-digits) at the given precision; handy for tolerances written in decimal.
BigReal tenth_power(long digits, Precision bits = kDefaultPrecisionBits);

std::ostream& operator<<(std::ostream& os, const BigReal& x);

// Enough decimal digits to make the string round-trip at this precision.
int round_trip_digits(Precision bits);

// Precision from JTS_PRECISION_BITS when set and valid, otherwise the default.
Precision default_precision_from_env();

struct Complex {
  BigReal re;
  BigReal im;

  Complex() = default;
  Complex(BigReal r) : re(r), im(0L, r.precision()) {}
  Complex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}

  Precision precision() const { return std::max(re.precision(), im.precision()); }
  bool is_real() const { return im.is_zero(); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const BigReal& s) { return {a.re * s, a.im * s}; }
  friend Complex operator/(const Complex& a, const BigReal& s) { return {a.re / s, a.im / s}; }
  friend Complex operator/(const Complex& a, const Complex& b);
};

BigReal norm(const Complex& z);  // |z|^2
BigReal abs(const Complex& z);

}  // namespace jts
