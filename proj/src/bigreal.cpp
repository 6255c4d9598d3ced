#include "jts/bigreal.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "jts/error.hpp"

namespace jts {

namespace {

Precision checked(Precision bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw Error(ErrorCode::PreconditionViolated, "precision out of range: " + std::to_string(bits));
  }
  return bits;
}

Precision joint(const BigReal& a, const BigReal& b) { return std::max(a.precision(), b.precision()); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

BigReal::BigReal(Precision bits, Uninit) { mpfr_init2(v_, checked(bits)); }

BigReal::BigReal() : BigReal(kDefaultPrecisionBits, Uninit{}) { mpfr_set_zero(v_, 1); }

BigReal::BigReal(long v, Precision bits) : BigReal(bits, Uninit{}) { mpfr_set_si(v_, v, MPFR_RNDN); }

BigReal::BigReal(const BigReal& other) : BigReal(other.precision(), Uninit{}) { mpfr_set(v_, other.v_, MPFR_RNDN); }

BigReal::BigReal(BigReal&& other) noexcept {
  // Leave the source as a valid minimal-precision zero so its destructor stays cheap.
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigReal BigReal::from_double(double v, Precision bits) {
  BigReal r(bits, Uninit{});
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

BigReal BigReal::parse(std::string_view text, Precision bits) {
  std::string s(trim(text));
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty decimal string");
  BigReal r(bits, Uninit{});
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0' || mpfr_nan_p(r.v_)) {
    throw Error(ErrorCode::ParseError, "not a decimal number: '" + s + "'");
  }
  return r;
}

BigReal BigReal::infinity(int sign, Precision bits) {
  BigReal r(bits, Uninit{});
  mpfr_set_inf(r.v_, sign < 0 ? -1 : 1);
  return r;
}

BigReal BigReal::pi(Precision bits) {
  BigReal r(bits, Uninit{});
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

std::string BigReal::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
  if (mpfr_zero_p(v_)) return "0";

  mpfr_exp_t e10 = 0;
  const size_t n = digits > 0 ? static_cast<size_t>(digits) : static_cast<size_t>(round_trip_digits(precision()));
  char* raw = mpfr_get_str(nullptr, &e10, 10, n, v_, MPFR_RNDN);
  std::string m(raw);
  mpfr_free_str(raw);

  bool neg = false;
  if (!m.empty() && m.front() == '-') {
    neg = true;
    m.erase(0, 1);
  }
  while (m.size() > 1 && m.back() == '0') m.pop_back();

  // value = 0.m * 10^e10; print plain decimals for moderate exponents.
  std::string out;
  const long e = static_cast<long>(e10);
  const long len = static_cast<long>(m.size());
  if (e > -5 && e <= 21) {
    if (e <= 0) {
      out = "0." + std::string(static_cast<size_t>(-e), '0') + m;
    } else if (e >= len) {
      out = m + std::string(static_cast<size_t>(e - len), '0');
    } else {
      out = m.substr(0, static_cast<size_t>(e)) + "." + m.substr(static_cast<size_t>(e));
    }
  } else {
    out = m.substr(0, 1);
    if (len > 1) out += "." + m.substr(1);
    const long sci = e - 1;
    out += (sci < 0 ? "e-" : "e+") + std::to_string(sci < 0 ? -sci : sci);
  }
  return neg ? "-" + out : out;
}

BigReal BigReal::with_precision(Precision bits) const {
  BigReal r(bits, Uninit{});
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

double BigReal::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

long BigReal::to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

long BigReal::exponent2() const {
  if (mpfr_zero_p(v_) || !mpfr_number_p(v_)) return 0;
  return static_cast<long>(mpfr_get_exp(v_));
}

BigReal& BigReal::operator+=(const BigReal& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(joint(a, b), BigReal::Uninit{});
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(joint(a, b), BigReal::Uninit{});
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(joint(a, b), BigReal::Uninit{});
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(joint(a, b), BigReal::Uninit{});
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a.precision(), BigReal::Uninit{});
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigReal operator+(const BigReal& a, long b) {
  BigReal r(a.precision(), BigReal::Uninit{});
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, long b) {
  BigReal r(a.precision(), BigReal::Uninit{});
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator-(long a, const BigReal& b) {
  BigReal r(b.precision(), BigReal::Uninit{});
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.precision(), BigReal::Uninit{});
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.precision(), BigReal::Uninit{});
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator/(long a, const BigReal& b) {
  BigReal r(b.precision(), BigReal::Uninit{});
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

std::partial_ordering operator<=>(const BigReal& a, long b) {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

#define JTS_UNARY(name, fn)                  \
  BigReal name(const BigReal& x) {           \
    BigReal r(0L, x.precision());            \
    fn(r.get(), x.get(), MPFR_RNDN);         \
    return r;                                \
  }

JTS_UNARY(abs, mpfr_abs)
JTS_UNARY(sqrt, mpfr_sqrt)
JTS_UNARY(log, mpfr_log)
JTS_UNARY(log10, mpfr_log10)
JTS_UNARY(exp, mpfr_exp)
JTS_UNARY(asinh, mpfr_asinh)
JTS_UNARY(sinh, mpfr_sinh)

#undef JTS_UNARY

BigReal floor(const BigReal& x) {
  BigReal r(0L, x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r(0L, joint(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigReal pow(const BigReal& x, long n) {
  BigReal r(0L, x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

BigReal ldexp(const BigReal& x, long e) {
  BigReal r(0L, x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

BigReal epsilon(Precision bits) { return ldexp(BigReal(1L, bits), -bits); }

BigReal tenth_power(long digits, Precision bits) {
  BigReal ten(10L, bits);
  return pow(ten, -digits);
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(); }

int round_trip_digits(Precision bits) {
  // 1 + ceil(p log10 2) is sufficient for a base-2 -> base-10 -> base-2 identity.
  return 1 + static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30102999566398120));
}

Precision default_precision_from_env() {
  const char* env = std::getenv("JTS_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return kDefaultPrecisionBits;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < kMinPrecisionBits) return kDefaultPrecisionBits;
  return v;
}

Complex operator/(const Complex& a, const Complex& b) {
  const BigReal d = norm(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

BigReal norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

BigReal abs(const Complex& z) {
  BigReal r(0L, z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

}  // namespace jts
