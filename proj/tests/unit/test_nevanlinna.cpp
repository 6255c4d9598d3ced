#include <doctest.h>

#include "fixtures.hpp"
#include "jts/error.hpp"
#include "jts/nevanlinna.hpp"

using namespace jts;
using fx::num;

namespace {

// D and B straight from the Wronskian definitions, with a recurrence written here.
std::pair<BigReal, BigReal> oracle_DB(const JacobiMatrix& m, const BigReal& x) {
  const std::size_t n = m.size();
  const auto run = [&](const BigReal& at, BigReal f0, BigReal f1) {
    std::vector<BigReal> v = {f0, f1};
    for (std::size_t k = 1; k < n; ++k) {
      v.push_back(((at - m.q(k + 1)) * v[k] - m.b(k) * v[k - 1]) / m.b(k + 1));
    }
    return v;
  };
  const BigReal zero(0L, fx::kBits);
  const std::vector<BigReal> p0 = run(zero, num(1L), (zero - m.q(1)) / m.b(1));
  const std::vector<BigReal> q0 = run(zero, num(0L), 1L / m.b(1));
  const std::vector<BigReal> px = run(x, num(1L), (x - m.q(1)) / m.b(1));
  const auto w = [&](const std::vector<BigReal>& f, const std::vector<BigReal>& g) {
    return m.b(n) * (f[n - 1] * g[n] - g[n - 1] * f[n]);
  };
  return {w(p0, px), w(q0, px)};
}

}  // namespace

TEST_CASE("D and B at the origin") {
  const NevanlinnaValue v = fx::nev2().eval_DB(num(0L));
  CHECK(abs(v.D) < num("1e-30"));
  CHECK(abs(v.B + 1L) < num("1e-30"));
  // D′(0) = a(0)
  CHECK(fx::rel(v.D_prime, norm_squared_P(fx::nev2().matrix(), num(0L)).value) < 1e-60);
}

TEST_CASE("D and B match the Wronskian oracle") {
  const JacobiMatrix& m = fx::nev2().matrix();
  for (const char* xs : {"0.5", "-3", "17.25", "-5000", "1e9"}) {
    const BigReal x = num(xs);
    const auto [d, b] = oracle_DB(m, x);
    const NevanlinnaValue v = fx::nev2().eval_DB(x);
    CHECK(fx::rel(v.D, d) < 1e-50);
    CHECK(fx::rel(v.B, b) < 1e-50);
    const auto fast = fx::nev2().DB(x);
    CHECK(fast.first == v.D);
    CHECK(fast.second == v.B);
  }
}

TEST_CASE("a(x) = D B′ − B D′ inside the trust window") {
  const JacobiMatrix& m = fx::nev2().matrix();
  for (const char* xs : {"0", "1", "-2.5", "100", "-7e4", "3e8", "-1e11"}) {
    const BigReal x = num(xs);
    const NevanlinnaValue v = fx::nev2().evaluate(x);
    const BigReal a = norm_squared_P(m, x, 1.0).value;
    CHECK(fx::rel(v.D * v.B_prime - v.B * v.D_prime, a) < 1e-20);
  }
}

TEST_CASE("trust radius") {
  const TrustReport t = trust_radius(fx::nev2());
  CHECK(t.radius > num("1e10"));
  CHECK(t.radius < num("1e13"));
  REQUIRE_FALSE(t.probes.empty());
  for (const TrustProbe& p : t.probes) {
    if (abs(p.x) < t.radius) CHECK(p.ok);
  }
  CHECK_FALSE(t.probes.back().ok);
}

TEST_CASE("eigenvalues are zeros of the right boundary combination") {
  for (const char* t : {"1", "-3", "0.5"}) {
    const Spectrum& s = fx::spectrum2(t);
    const BigReal tau = num(t);
    CHECK(s.eigenvalues.size() > 30);
    for (const BigReal& lam : s.eigenvalues) {
      if (abs(lam) > num("1e6")) continue;
      const NevanlinnaValue v = fx::nev2().eval_DB(lam);
      CHECK(abs(-v.D / v.B - tau) < num("1e-40"));
    }
  }
  for (const BigReal& lam : fx::spectrum2("inf").eigenvalues) {
    if (abs(lam) > num("1e6")) continue;
    const NevanlinnaValue v = fx::nev2().eval_DB(lam);
    CHECK(abs(v.B) < abs(v.D) * num("1e-40"));
  }
}

TEST_CASE("tau = 0 contains 0 exactly") {
  const Spectrum& s = fx::spectrum2("0");
  long zeros = 0;
  for (const BigReal& x : s.eigenvalues) zeros += x.is_zero() ? 1 : 0;
  CHECK(zeros == 1);
  CHECK(s.tau.is_zero());
}

TEST_CASE("spectra of different extensions are disjoint and interlace") {
  const auto& l = fx::spectrum2("1").eigenvalues;
  const auto& u = fx::spectrum2("inf").eigenvalues;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    long between = 0;
    for (const BigReal& x : l) between += (u[i] < x && x < u[i + 1]) ? 1 : 0;
    CHECK(between == 1);
  }
  for (const BigReal& x : l) {
    for (const BigReal& y : u) CHECK(abs(x - y) > num("1e-30"));
  }
}

TEST_CASE("window handling") {
  const Nevanlinna& nev = fx::nev2();
  const ExtensionParameter one = ExtensionParameter::parse("1");
  CHECK_THROWS_AS(find_spectrum(nev, one, num("-1e14"), num("1e14")), Error);
  try {
    find_spectrum(nev, one, num("-1e14"), num(0L));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowUntrusted);
  }
  const Spectrum small = find_spectrum(nev, one, num(-12L), num(12L));
  CHECK(small.eigenvalues.size() == 3);
  // Enlarging the window only appends.
  const Spectrum mid = find_spectrum(nev, one, num("-1e6"), num("1e6"));
  const auto& all = fx::spectrum2("1").eigenvalues;
  for (const BigReal& x : mid.eigenvalues) {
    bool found = false;
    for (const BigReal& y : all) found = found || abs(x - y) <= abs(x) * num("1e-60");
    CHECK(found);
  }
  for (const BigReal& x : small.eigenvalues) {
    bool found = false;
    for (const BigReal& y : mid.eigenvalues) found = found || x == y;
    CHECK(found);
  }
}

TEST_CASE("Sturm count agrees with the located zeros") {
  const Spectrum& s = fx::spectrum2("1");
  const ExtensionParameter one = ExtensionParameter::parse("1");
  const long below_lo = count_zeros_below(fx::nev2(), one, s.window_lo);
  const long below_hi = count_zeros_below(fx::nev2(), one, s.window_hi);
  CHECK(below_hi - below_lo == static_cast<long>(s.eigenvalues.size()));
  CHECK(count_zeros_below(fx::nev2(), one, num(0L)) - below_lo == 19);
}

TEST_CASE("normalizing constants") {
  for (const char* t : {"1", "inf", "0"}) {
    const Spectrum& s = fx::spectrum2(t);
    REQUIRE(s.normalizing_constants);
    CompensatedSum partial(fx::kBits);
    BigReal last(0L, fx::kBits);
    for (const BigReal& a : *s.normalizing_constants) {
      CHECK(a >= 1L);
      partial.add(1L / a);
      CHECK(partial.value() >= last);
      last = partial.value();
    }
    const BigReal mass = spectral_mass(s);
    CHECK(mass.to_double() > 0.999);
    CHECK(mass < 1L + num("1e-12"));
  }
  // ℛ_0 = D, so the constant at 0 is D′(0) = a(0)
  const Spectrum& z = fx::spectrum2("0");
  for (std::size_t i = 0; i < z.eigenvalues.size(); ++i) {
    if (z.eigenvalues[i].is_zero()) {
      CHECK(fx::rel((*z.normalizing_constants)[i], num(4L) / 3L) < 1e-11);
    }
  }
}
