#include <doctest.h>

#include "fixtures.hpp"
#include "jts/core.hpp"
#include "jts/error.hpp"

using namespace jts;
using fx::num;

TEST_CASE("first kind by hand at 0 and 1") {
  const JacobiMatrix m = fx::geometric(10);
  const RealTable p0 = eval_first_kind(m, num(0L));
  REQUIRE(p0.values.size() == 11);
  CHECK(p0.values[0] == 1L);
  CHECK(p0.values[1].is_zero());
  CHECK(p0.values[2] == num("-0.5"));
  CHECK(p0.values[3].is_zero());
  CHECK(p0.values[4] == num("0.25"));
  // P_{2k}(0) = (-1)^k 2^-k
  for (long k = 0; 2 * k <= 10; ++k) CHECK(p0.values[2 * k] == ldexp(num(k % 2 ? -1L : 1L), -k));

  const RealTable p1 = eval_first_kind(m, num(1L));
  CHECK(p1.values[1] == num("0.5"));
  CHECK(p1.values[2] == num("-0.375"));
}

TEST_CASE("second kind by hand") {
  const JacobiMatrix m = fx::geometric(10);
  const RealTable q = eval_second_kind(m, num(0L));
  CHECK(q.values[0].is_zero());
  CHECK(q.values[1] == num("0.5"));
  CHECK(q.values[2].is_zero());
  CHECK(q.values[3] == num("-0.25"));
  CHECK(eval_second_kind(m, num(7L)).values[1] == num("0.5"));
}

TEST_CASE("complex evaluation agrees with the real one on the axis") {
  const JacobiMatrix m = fx::geometric(12);
  const ComplexTable c = eval_first_kind(m, Complex(num("1.25")));
  const RealTable r = eval_first_kind(m, num("1.25"));
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    CHECK(c.values[k].re == r.values[k]);
    CHECK(c.values[k].im.is_zero());
  }
}

TEST_CASE("Wronskian: hand value, antisymmetry, index range") {
  const JacobiMatrix m = fx::geometric(10);
  const RealTable p = eval_first_kind(m, num(0L));
  const RealTable q = eval_second_kind(m, num(0L));
  CHECK(wronskian_at(m, p, q, 1) == 1L);
  CHECK(wronskian_at(m, p, p, 2).is_zero());
  const RealTable p3 = eval_first_kind(m, num("3.5"));
  for (std::size_t k = 1; k <= 10; ++k) CHECK(wronskian_at(m, p, p3, k) == -wronskian_at(m, p3, p, k));
  CHECK_THROWS_AS(wronskian_at(m, p, q, 0), Error);
  CHECK_THROWS_AS(wronskian_at(m, p, q, 11), Error);
}

TEST_CASE("Liouville-Ostrogradskii constancy, real and complex") {
  const JacobiMatrix m = fx::geometric(40);
  for (const char* x : {"0", "-3.7", "12.5", "1000.25"}) {
    const RealTable p = eval_first_kind(m, num(x));
    const RealTable q = eval_second_kind(m, num(x));
    // cancellation grows with |x|: P_k Q_{k+1} is far from 1 in size
    for (std::size_t k = 1; k + 1 < m.size(); ++k) {
      const BigReal size = m.b(k) * abs(p.values[k - 1] * q.values[k]) + 1L;
      CHECK(abs(wronskian_at(m, p, q, k) - 1L) < size * epsilon(240));
    }
  }
  const Complex i(num(0L), num(1L));
  const ComplexTable p = eval_first_kind(m, i);
  const ComplexTable q = eval_second_kind(m, i);
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    const Complex w = wronskian_at(m, p, q, k);
    CHECK(abs(w.re - 1L) < epsilon(200));
    CHECK(abs(w.im) < epsilon(200));
  }
}

TEST_CASE("Christoffel-Darboux through the differentiated recurrence") {
  const JacobiMatrix m = fx::geometric(30);
  for (const char* xs : {"0", "2.5", "-41"}) {
    const BigReal x = num(xs);
    const RealTable p = eval_first_kind(m, x);
    const RealTable dp = eval_first_kind_derivative(m, x);
    CompensatedSum s(fx::kBits);
    for (std::size_t n = 1; n < m.size(); ++n) {
      s.add(p.values[n - 1] * p.values[n - 1]);
      CHECK(fx::rel(wronskian_at(m, p, dp, n), s.value()) < 1e-60);
    }
  }
}

TEST_CASE("derivative table against a centred difference") {
  const JacobiMatrix m = fx::geometric(8);
  const BigReal x = num("0.75");
  const BigReal h = ldexp(num(1L), -80);
  const RealTable d = eval_first_kind_derivative(m, x);
  const RealTable hi = eval_first_kind(m, x + h);
  const RealTable lo = eval_first_kind(m, x - h);
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    const BigReal fd = (hi.values[k] - lo.values[k]) / (h * 2L);
    CHECK(abs(fd - d.values[k]) < epsilon(100));
  }
  CHECK(eval_second_kind_derivative(m, x).values[1].is_zero());
}

TEST_CASE("P_n has exact degree n with leading coefficient 1/(b_1...b_n)") {
  const JacobiMatrix m = fx::geometric(8);
  const std::size_t n = 5;
  // divided differences over n + 2 points
  std::vector<BigReal> xs, ys;
  for (long i = 0; i < static_cast<long>(n) + 2; ++i) {
    xs.push_back(num(i) - num("2.5"));
    ys.push_back(eval_first_kind(m, xs.back()).values[n]);
  }
  std::vector<BigReal> dd = ys;
  std::vector<BigReal> order_n;
  for (std::size_t level = 1; level <= n + 1; ++level) {
    for (std::size_t i = 0; i + level < xs.size(); ++i) dd[i] = (dd[i + 1] - dd[i]) / (xs[i + level] - xs[i]);
    if (level == n) order_n.assign(dd.begin(), dd.begin() + 2);
  }
  BigReal lead(1L, fx::kBits);
  for (std::size_t k = 1; k <= n; ++k) lead = lead / m.b(k);
  CHECK(order_n[0] > 0L);
  CHECK(fx::rel(order_n[0], lead) < 1e-60);
  CHECK(abs(dd[0]) < epsilon(150));
}

TEST_CASE("matrix validation") {
  std::vector<BigReal> b = {num(1L), num(2L), num(3L)};
  std::vector<BigReal> q = {num(0L), num(0L), num(0L)};
  CHECK_NOTHROW(JacobiMatrix(b, q));
  CHECK_THROWS_AS(JacobiMatrix(b, {num(0L), num(0L)}), Error);
  std::vector<BigReal> bad = b;
  bad[1] = num(0L);
  CHECK_THROWS_AS(JacobiMatrix(bad, q), Error);
  bad[1] = num(-1L);
  try {
    JacobiMatrix(bad, q);
    FAIL("accepted a negative b");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidMatrix);
  }
  const JacobiMatrix m = fx::geometric(10);
  CHECK(m.b(3) == 8L);
  CHECK(m.leading(4).size() == 4);
  CHECK_THROWS_AS(m.b(0), Error);
  CHECK_THROWS_AS(m.q(11), Error);
}

TEST_CASE("extension parameters") {
  CHECK(ExtensionParameter::parse("inf").is_infinite());
  CHECK(ExtensionParameter::parse("∞").is_infinite());
  CHECK(ExtensionParameter::parse("0").is_zero());
  CHECK(ExtensionParameter::parse("-2.5").value() == num("-2.5"));
  CHECK(ExtensionParameter::parse("inf") == ExtensionParameter::infinity());
  CHECK_FALSE(ExtensionParameter::parse("1") == ExtensionParameter::infinity());
  CHECK(ExtensionParameter::parse("1").to_string() == "1");
  CHECK_THROWS_AS(ExtensionParameter::parse("one"), Error);
}

TEST_CASE("limit-circle verdicts") {
  const LimitCircleReport lc = limit_circle_check(fx::geometric(40), BigReal::from_double(kDefaultCircleTolerance));
  CHECK(lc.verdict == CircleVerdict::LimitCircle);
  CHECK(lc.berezanskii_ok);
  CHECK(lc.sup_abs_q.is_zero());
  CHECK(lc.tail_ratio.to_double() < 1e-10);

  // At N = 40 the last terms are still ~1e-12 of the sums, which no 1e-20 tolerance can certify.
  const LimitCircleReport strict = limit_circle_check(fx::geometric(40), num("1e-20"));
  CHECK(strict.verdict == CircleVerdict::Inconclusive);
  CHECK(strict.tail_ratio.to_double() > 1e-20);

  std::vector<BigReal> ones(200, num(1L)), zeros(200, num(0L));
  const LimitCircleReport free_m = limit_circle_check(JacobiMatrix(ones, zeros), num("1e-20"));
  CHECK(free_m.verdict != CircleVerdict::LimitCircle);
  CHECK_FALSE(free_m.berezanskii_ok);

  CHECK(limit_circle_check(fx::geometric(5), num("1e-8")).verdict == CircleVerdict::Inconclusive);
}

TEST_CASE("norm of P at 0") {
  const JacobiMatrix m = fx::geometric(40);
  const NormSquared a = norm_squared_P(m, num(0L));
  // Σ_{j<20} 4^-j exactly
  const BigReal want = (num(4L) / 3L) * (1L - ldexp(num(1L), -40));
  CHECK(fx::rel(a.value, want) < 1e-70);
  const NormSquared a6 = norm_squared_P(fx::geometric(6), num(0L));
  CHECK(fx::rel(a6.value, (num(4L) / 3L) * (1L - ldexp(num(1L), -6))) < 1e-70);
  CHECK(norm_squared_P(m, num("123.5")).value >= 1L);
  CHECK_THROWS_AS(norm_squared_P(m, num("1e30")), Error);
}

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s(64);
  s.add(num(1L).with_precision(64));
  for (int i = 0; i < 1000; ++i) s.add(ldexp(BigReal(1L, 64), -70));
  CHECK(s.value() > 1L);
}
