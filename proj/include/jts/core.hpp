#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "jts/bigreal.hpp"

namespace jts {

// Leading N entries of a semi-infinite Jacobi matrix. Public indexing follows the
// matrix convention: b(n), q(n) for n = 1..N.
class JacobiMatrix {
public:
  JacobiMatrix() = default;
  // Throws InvalidMatrix unless b_n > 0, q_n finite, equal lengths and N >= min_length.
  JacobiMatrix(std::vector<BigReal> b, std::vector<BigReal> q, Precision bits = kDefaultPrecisionBits,
               std::size_t min_length = 3);

  std::size_t size() const { return b_.size(); }
  Precision precision() const { return bits_; }
  const BigReal& b(std::size_t n) const;
  const BigReal& q(std::size_t n) const;
  const std::vector<BigReal>& b_entries() const { return b_; }
  const std::vector<BigReal>& q_entries() const { return q_; }

  // Leading n x n section.
  JacobiMatrix leading(std::size_t n) const;

private:
  std::vector<BigReal> b_;
  std::vector<BigReal> q_;
  Precision bits_ = kDefaultPrecisionBits;
};

class ExtensionParameter {
public:
  static ExtensionParameter finite(BigReal tau) { return ExtensionParameter(std::move(tau), false); }
  static ExtensionParameter infinity() { return ExtensionParameter(BigReal(), true); }
  // "inf", "∞" or a decimal string.
  static ExtensionParameter parse(const std::string& text, Precision bits = kDefaultPrecisionBits);

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  bool is_zero() const { return !infinite_ && tau_.is_zero(); }
  // Only meaningful for finite parameters.
  const BigReal& value() const { return tau_; }
  std::string to_string() const { return infinite_ ? "inf" : tau_.to_string(); }

  friend bool operator==(const ExtensionParameter& a, const ExtensionParameter& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.tau_ == b.tau_);
  }

private:
  ExtensionParameter(BigReal tau, bool inf) : tau_(std::move(tau)), infinite_(inf) {}
  BigReal tau_;
  bool infinite_ = false;
};

enum class PolynomialKind { FirstKind, SecondKind };

// P_0(ζ)..P_N(ζ) (or Q_0..Q_N). One entry past the matrix length is kept so that the
// Wronskian at the last given index, W_N, is available.
template <class T>
struct PolynomialTable {
  PolynomialKind kind = PolynomialKind::FirstKind;
  Complex point;
  std::vector<T> values;

  // 1-based sequence access, phi_k = values[k-1].
  const T& seq(std::size_t k) const { return values.at(k - 1); }
};

using RealTable = PolynomialTable<BigReal>;
using ComplexTable = PolynomialTable<Complex>;

RealTable eval_first_kind(const JacobiMatrix& m, const BigReal& x);
RealTable eval_second_kind(const JacobiMatrix& m, const BigReal& x);
ComplexTable eval_first_kind(const JacobiMatrix& m, const Complex& z);
ComplexTable eval_second_kind(const JacobiMatrix& m, const Complex& z);

// d/dx of the first-kind table, by the differentiated recurrence.
RealTable eval_first_kind_derivative(const JacobiMatrix& m, const BigReal& x);
RealTable eval_second_kind_derivative(const JacobiMatrix& m, const BigReal& x);

// W_k(φ,ψ) = b_k(φ_k ψ_{k+1} − ψ_k φ_{k+1}), 1 <= k <= N. Throws IndexOutOfRange.
BigReal wronskian_at(const JacobiMatrix& m, const RealTable& phi, const RealTable& psi, std::size_t k);
Complex wronskian_at(const JacobiMatrix& m, const ComplexTable& phi, const ComplexTable& psi, std::size_t k);

enum class CircleVerdict { LimitCircle, LimitPoint, Inconclusive };
const char* to_string(CircleVerdict v);

struct LimitCircleReport {
  BigReal tail_sum_P;
  BigReal tail_sum_Q;
  BigReal tail_ratio_P;  // largest of the last two terms over the partial sum
  BigReal tail_ratio_Q;
  BigReal tail_ratio;    // max of the two
  BigReal sup_abs_q;
  long log_concave_from = -1;  // first n from which b_{n-1}b_{n+1} <= b_n^2 holds, -1 if never
  double inverse_b_slope = 0;  // log-log slope of 1/b_n over the tail
  bool berezanskii_ok = false;
  CircleVerdict verdict = CircleVerdict::Inconclusive;
};

inline constexpr double kDefaultCircleTolerance = 1e-8;

LimitCircleReport limit_circle_check(const JacobiMatrix& m, const BigReal& tolerance);

struct NormSquared {
  BigReal value;       // Σ_{k<N} P_k(x)^2
  BigReal tail_ratio;  // largest of the last two terms over the sum
};

inline constexpr double kDefaultNormTailThreshold = 0.5;

// Throws TailNotConverged when the tail ratio exceeds the threshold.
NormSquared norm_squared_P(const JacobiMatrix& m, const BigReal& x, double threshold = kDefaultNormTailThreshold);

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  explicit CompensatedSum(Precision bits = kDefaultPrecisionBits) : sum_(0L, bits), comp_(0L, bits) {}
  void add(const BigReal& x);
  BigReal value() const { return sum_ + comp_; }

private:
  BigReal sum_;
  BigReal comp_;
};

}  // namespace jts
