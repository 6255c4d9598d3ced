#include "jts/core.hpp"

#include <cmath>

#include "jts/error.hpp"

namespace jts {

JacobiMatrix::JacobiMatrix(std::vector<BigReal> b, std::vector<BigReal> q, Precision bits, std::size_t min_length)
  : b_(std::move(b)), q_(std::move(q)), bits_(bits) {
  if (bits_ < kMinPrecisionBits) {
    throw Error(ErrorCode::InvalidMatrix, "precision below " + std::to_string(kMinPrecisionBits) + " bits");
  }
  if (b_.size() != q_.size()) {
    throw Error(ErrorCode::InvalidMatrix, "b and q lengths differ (" + std::to_string(b_.size()) + " vs " +
                                              std::to_string(q_.size()) + ")");
  }
  if (b_.size() < min_length) {
    throw Error(ErrorCode::InvalidMatrix, "matrix needs at least " + std::to_string(min_length) + " entries");
  }
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (!b_[i].is_finite() || b_[i].sign() <= 0) {
      throw Error(ErrorCode::InvalidMatrix, "b_" + std::to_string(i + 1) + " must be finite and positive", "",
                  static_cast<long>(i + 1));
    }
    if (!q_[i].is_finite()) {
      throw Error(ErrorCode::InvalidMatrix, "q_" + std::to_string(i + 1) + " must be finite", "",
                  static_cast<long>(i + 1));
    }
    if (b_[i].precision() != bits_) b_[i] = b_[i].with_precision(bits_);
    if (q_[i].precision() != bits_) q_[i] = q_[i].with_precision(bits_);
  }
}

const BigReal& JacobiMatrix::b(std::size_t n) const {
  if (n < 1 || n > b_.size()) throw Error(ErrorCode::IndexOutOfRange, "b index " + std::to_string(n));
  return b_[n - 1];
}

const BigReal& JacobiMatrix::q(std::size_t n) const {
  if (n < 1 || n > q_.size()) throw Error(ErrorCode::IndexOutOfRange, "q index " + std::to_string(n));
  return q_[n - 1];
}

JacobiMatrix JacobiMatrix::leading(std::size_t n) const {
  if (n > size()) throw Error(ErrorCode::IndexOutOfRange, "section larger than matrix");
  return JacobiMatrix({b_.begin(), b_.begin() + static_cast<long>(n)}, {q_.begin(), q_.begin() + static_cast<long>(n)},
                      bits_, 1);
}

ExtensionParameter ExtensionParameter::parse(const std::string& text, Precision bits) {
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "∞") return infinity();
  return finite(BigReal::parse(text, bits));
}

namespace {

bool finite_value(const BigReal& v) { return v.is_finite(); }
bool finite_value(const Complex& v) { return v.re.is_finite() && v.im.is_finite(); }

template <class T>
T zero_like(Precision bits) {
  return T(BigReal(0L, bits));
}

template <class T>
T lift(const T& z, Precision bits);

template <>
BigReal lift(const BigReal& z, Precision bits) {
  return z.precision() >= bits ? z : z.with_precision(bits);
}

template <>
Complex lift(const Complex& z, Precision bits) {
  return {lift(z.re, bits), lift(z.im, bits)};
}

// values[0], values[1] given; b_n v_n = (z - q_n) v_{n-1} - b_{n-1} v_{n-2} for n = 2..N.
template <class T>
std::vector<T> run_recurrence(const JacobiMatrix& m, const T& z, T v0, T v1) {
  const std::size_t n_max = m.size();
  std::vector<T> v;
  v.reserve(n_max + 1);
  v.push_back(std::move(v0));
  v.push_back(std::move(v1));
  for (std::size_t n = 2; n <= n_max; ++n) {
    T next = ((z - T(m.q(n))) * v[n - 1] - v[n - 2] * m.b(n - 1)) / m.b(n);
    if (!finite_value(next)) {
      throw Error(ErrorCode::PrecisionUnderflow, "recurrence left the representable range at index " + std::to_string(n),
                  "", static_cast<long>(n));
    }
    v.push_back(std::move(next));
  }
  return v;
}

template <class T>
PolynomialTable<T> first_kind(const JacobiMatrix& m, const T& z_in) {
  const T z = lift(z_in, m.precision());
  PolynomialTable<T> t;
  t.kind = PolynomialKind::FirstKind;
  t.point = Complex(z);
  T one = T(BigReal(1L, m.precision()));
  T p1 = (z - T(m.q(1))) / m.b(1);
  t.values = run_recurrence(m, z, std::move(one), std::move(p1));
  return t;
}

template <class T>
PolynomialTable<T> second_kind(const JacobiMatrix& m, const T& z_in) {
  const T z = lift(z_in, m.precision());
  PolynomialTable<T> t;
  t.kind = PolynomialKind::SecondKind;
  t.point = Complex(z);
  T q1 = T(BigReal(1L, m.precision()) / m.b(1));
  t.values = run_recurrence(m, z, zero_like<T>(m.precision()), std::move(q1));
  return t;
}

RealTable derivative_of(const JacobiMatrix& m, const BigReal& x, const RealTable& base) {
  const std::size_t n_max = m.size();
  RealTable d;
  d.kind = base.kind;
  d.point = base.point;
  d.values.reserve(n_max + 1);
  d.values.emplace_back(0L, m.precision());
  d.values.emplace_back(0L, m.precision());
  // The first-order terms are constant in x, so both start with zero derivative at index 0;
  // P_1' = 1/b_1 and Q_1' = 0.
  if (base.kind == PolynomialKind::FirstKind) d.values[1] = BigReal(1L, m.precision()) / m.b(1);
  for (std::size_t n = 2; n <= n_max; ++n) {
    BigReal next = (base.values[n - 1] + (x - m.q(n)) * d.values[n - 1] - m.b(n - 1) * d.values[n - 2]) / m.b(n);
    if (!next.is_finite()) {
      throw Error(ErrorCode::PrecisionUnderflow, "derivative recurrence overflow at index " + std::to_string(n), "",
                  static_cast<long>(n));
    }
    d.values.push_back(std::move(next));
  }
  return d;
}

template <class T>
T wronskian_impl(const JacobiMatrix& m, const PolynomialTable<T>& phi, const PolynomialTable<T>& psi, std::size_t k) {
  if (k < 1 || k > m.size() || k >= phi.values.size() || k >= psi.values.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "Wronskian index " + std::to_string(k) + " outside 1.." + std::to_string(m.size()), "",
                static_cast<long>(k));
  }
  return (phi.values[k - 1] * psi.values[k] - psi.values[k - 1] * phi.values[k]) * m.b(k);
}

BigReal tail_ratio_of(const std::vector<BigReal>& terms, const BigReal& sum) {
  const std::size_t n = terms.size();
  const BigReal& last = n >= 2 ? max(terms[n - 1], terms[n - 2]) : terms.back();
  return sum.is_zero() ? BigReal(0L, sum.precision()) : last / sum;
}

}  // namespace

RealTable eval_first_kind(const JacobiMatrix& m, const BigReal& x) { return first_kind(m, x); }
RealTable eval_second_kind(const JacobiMatrix& m, const BigReal& x) { return second_kind(m, x); }
ComplexTable eval_first_kind(const JacobiMatrix& m, const Complex& z) { return first_kind(m, z); }
ComplexTable eval_second_kind(const JacobiMatrix& m, const Complex& z) { return second_kind(m, z); }

RealTable eval_first_kind_derivative(const JacobiMatrix& m, const BigReal& x) {
  const BigReal xl = lift(x, m.precision());
  return derivative_of(m, xl, eval_first_kind(m, xl));
}

RealTable eval_second_kind_derivative(const JacobiMatrix& m, const BigReal& x) {
  const BigReal xl = lift(x, m.precision());
  return derivative_of(m, xl, eval_second_kind(m, xl));
}

BigReal wronskian_at(const JacobiMatrix& m, const RealTable& phi, const RealTable& psi, std::size_t k) {
  return wronskian_impl(m, phi, psi, k);
}

Complex wronskian_at(const JacobiMatrix& m, const ComplexTable& phi, const ComplexTable& psi, std::size_t k) {
  return wronskian_impl(m, phi, psi, k);
}

const char* to_string(CircleVerdict v) {
  switch (v) {
    case CircleVerdict::LimitCircle: return "LimitCircle";
    case CircleVerdict::LimitPoint: return "LimitPoint";
    case CircleVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

LimitCircleReport limit_circle_check(const JacobiMatrix& m, const BigReal& tolerance) {
  LimitCircleReport r;
  const Precision bits = m.precision();
  r.tail_sum_P = r.tail_sum_Q = r.tail_ratio_P = r.tail_ratio_Q = r.tail_ratio = r.sup_abs_q = BigReal(0L, bits);
  const std::size_t n = m.size();

  for (std::size_t k = 1; k <= n; ++k) r.sup_abs_q = max(r.sup_abs_q, abs(m.q(k)));

  if (n < 8) {
    r.verdict = CircleVerdict::Inconclusive;
    return r;
  }

  const Complex i(BigReal(0L, bits), BigReal(1L, bits));
  const ComplexTable p = eval_first_kind(m, i);
  const ComplexTable q = eval_second_kind(m, i);
  std::vector<BigReal> tp, tq;
  CompensatedSum sp(bits), sq(bits);
  for (std::size_t k = 0; k < n; ++k) {
    tp.push_back(norm(p.values[k]));
    tq.push_back(norm(q.values[k]));
    sp.add(tp.back());
    sq.add(tq.back());
  }
  r.tail_sum_P = sp.value();
  r.tail_sum_Q = sq.value();
  r.tail_ratio_P = tail_ratio_of(tp, r.tail_sum_P);
  r.tail_ratio_Q = tail_ratio_of(tq, r.tail_sum_Q);
  r.tail_ratio = max(r.tail_ratio_P, r.tail_ratio_Q);

  // Log-concavity b_{n-1} b_{n+1} <= b_n^2; equality is the geometric case, so allow a
  // few ulps of slack.
  const BigReal slack = 1L + epsilon(bits) * 64;
  long from = -1;
  for (std::size_t k = n - 1; k >= 2; --k) {
    if (m.b(k - 1) * m.b(k + 1) <= m.b(k) * m.b(k) * slack) {
      from = static_cast<long>(k);
    } else {
      break;
    }
  }
  r.log_concave_from = from;

  // Summability of 1/b_n from the tail: strictly decreasing terms and a log-log slope
  // steeper than -1.
  const std::size_t start = n / 2;
  bool decreasing = true;
  for (std::size_t k = start + 1; k <= n; ++k) decreasing = decreasing && m.b(k) > m.b(k - 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(n - start + 1);
  for (std::size_t k = start; k <= n; ++k) {
    const double lx = std::log(static_cast<double>(k));
    const double ly = -log(m.b(k)).to_double();
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  r.inverse_b_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  const bool summable = decreasing && r.inverse_b_slope < -1.1;
  r.berezanskii_ok = from >= 0 && static_cast<std::size_t>(from) <= n / 2 && summable;

  const auto decaying = [](const std::vector<BigReal>& t) {
    const std::size_t s = t.size();
    return (t[s - 1] + t[s - 2]) < (t[s - 3] + t[s - 4]);
  };
  if (r.tail_ratio_P < tolerance && r.tail_ratio_Q < tolerance) {
    r.verdict = CircleVerdict::LimitCircle;
  } else if (!decaying(tp) || !decaying(tq)) {
    r.verdict = CircleVerdict::LimitPoint;
  } else {
    r.verdict = CircleVerdict::Inconclusive;
  }
  return r;
}

NormSquared norm_squared_P(const JacobiMatrix& m, const BigReal& x, double threshold) {
  const RealTable p = eval_first_kind(m, x);
  const std::size_t n = m.size();
  std::vector<BigReal> terms;
  terms.reserve(n);
  CompensatedSum s(m.precision());
  for (std::size_t k = 0; k < n; ++k) {
    terms.push_back(p.values[k] * p.values[k]);
    s.add(terms.back());
  }
  NormSquared out{s.value(), BigReal()};
  out.tail_ratio = tail_ratio_of(terms, out.value);
  if (out.tail_ratio.to_double() > threshold) {
    throw Error(ErrorCode::TailNotConverged,
                "normalizing series tail ratio " + out.tail_ratio.to_string(6) + " at x = " + x.to_string(12));
  }
  return out;
}

void CompensatedSum::add(const BigReal& x) {
  BigReal t = sum_ + x;
  if (abs(sum_) >= abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = std::move(t);
}

}  // namespace jts
