#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "jts/error.hpp"
#include "jts/inverse.hpp"
#include "jts/nevanlinna.hpp"

using namespace jts;
using fx::num;

namespace {

std::vector<BigReal> nums(std::initializer_list<const char*> xs) {
  std::vector<BigReal> out;
  for (const char* x : xs) out.push_back(num(x));
  return out;
}

BigReal direct_product(const std::vector<BigReal>& nodes, const BigReal& x) {
  BigReal r(1L, fx::kBits);
  for (const BigReal& v : nodes) r = v.is_zero() ? r * x : r * (1L - x / v);
  return r;
}

// Stieltjes procedure on a discrete measure, written independently of the Lanczos code.
RecurrenceCoefficients stieltjes(const std::vector<BigReal>& x, const std::vector<BigReal>& w, std::size_t steps) {
  RecurrenceCoefficients out;
  std::vector<BigReal> prev(x.size(), num(0L)), cur(x.size(), num(1L));
  BigReal h_prev(1L, fx::kBits);
  for (std::size_t k = 0; k < steps; ++k) {
    BigReal h(0L, fx::kBits), xh(0L, fx::kBits);
    for (std::size_t i = 0; i < x.size(); ++i) {
      h = h + w[i] * cur[i] * cur[i];
      xh = xh + w[i] * x[i] * cur[i] * cur[i];
    }
    const BigReal alpha = xh / h;
    const BigReal beta2 = k == 0 ? num(0L) : h / h_prev;
    out.q.push_back(alpha);
    if (k > 0) out.b.push_back(sqrt(beta2));
    std::vector<BigReal> next(x.size(), num(0L));
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = (x[i] - alpha) * cur[i] - beta2 * prev[i];
    prev = cur;
    cur = next;
    h_prev = h;
  }
  return out;
}

// Every zero of D + τB (or B) for a short matrix, by scanning an asinh grid and bisecting.
std::vector<BigReal> all_zeros(const JacobiMatrix& m, const char* tau, std::size_t expect) {
  // the polynomials themselves; the truncation certificates do not apply to a finite matrix
  const Nevanlinna nev(m);
  const auto f = [&](const BigReal& x) {
    const auto [d, b] = nev.DB(x);
    return std::string(tau) == "inf" ? b : d + num(tau) * b;
  };
  std::vector<BigReal> out;
  const long steps = 40000;
  BigReal prev_x = -sinh(num(25L));
  BigReal prev_f = f(prev_x);
  for (long i = 1; i <= steps; ++i) {
    const BigReal x = sinh(num(25L) * (num(2 * i - steps) / steps));
    const BigReal fx_ = f(x);
    if (fx_.is_zero()) {
      out.push_back(x);
    } else if (prev_f.sign() * fx_.sign() < 0) {
      BigReal lo = prev_x, hi = x, flo = prev_f;
      for (int it = 0; it < 400; ++it) {
        const BigReal mid = ldexp(lo + hi, -1);
        const BigReal fm = f(mid);
        if (fm.is_zero()) {
          lo = hi = mid;
          break;
        }
        if (fm.sign() == flo.sign()) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(ldexp(lo + hi, -1));
    }
    prev_x = x;
    prev_f = fx_;
  }
  REQUIRE(out.size() == expect);
  return out;
}

const std::vector<BigReal>& lam() { return fx::spectrum2("1").eigenvalues; }
const std::vector<BigReal>& mu() { return fx::spectrum2("inf").eigenvalues; }

}  // namespace

TEST_CASE("product evaluation and derivatives at the nodes") {
  const std::vector<BigReal> nodes = nums({"-7", "-1.5", "2", "3.25", "40"});
  const ProductFunction f = ProductFunction::from_nodes({nodes[3], nodes[0], nodes[4], nodes[1], nodes[2]});
  CHECK(f.nodes == nodes);
  CHECK_FALSE(f.has_zero_node);
  for (const char* xs : {"0", "0.3", "-2", "11"}) CHECK(fx::rel(product_eval(f, num(xs)), direct_product(nodes, num(xs))) < 1e-70);
  CHECK(product_eval(f, num(0L)) == 1L);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    BigReal want = -1L / nodes[j];
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (k != j) want = want * (1L - nodes[j] / nodes[k]);
    }
    CHECK(fx::rel(product_derivative_at_node(f, j), want) < 1e-70);
  }

  const ProductFunction z = ProductFunction::from_nodes(nums({"-2", "0", "5"}));
  REQUIRE(z.has_zero_node);
  CHECK(z.zero_index() == 1);
  CHECK(product_derivative_at_node(z, 1) == 1L);
  // R = x(1 + x/2)(1 − x/5), R′(5) = 5 · (7/2) · (−1/5)
  CHECK(fx::rel(product_derivative_at_node(z, 2), num("-3.5")) < 1e-70);

  CHECK_THROWS_AS(ProductFunction::from_nodes(nums({"1", "2", "1"})), Error);
  const ProductFunction t = ProductFunction::from_nodes(nodes, num(100L));
  CHECK_NOTHROW(product_eval(t, num(99L)));
  try {
    product_eval(t, num(-100L));
    FAIL("evaluated outside the trust radius");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutsideTrustRadius);
  }
}

TEST_CASE("magnitude order") {
  const std::vector<std::size_t> o = magnitude_order(nums({"3", "-1", "1", "-5", "0.5"}));
  CHECK(o == std::vector<std::size_t>{4, 1, 2, 0, 3});
}

TEST_CASE("M against a direct sum and against the parameters") {
  const std::vector<BigReal> l = nums({"-3", "1", "4"});
  const std::vector<BigReal> m = nums({"-1", "2", "6"});
  BigReal want(0L, fx::kBits);
  for (std::size_t j = 0; j < l.size(); ++j) {
    BigReal d = -1L / l[j];
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (k != j) d = d * (1L - l[j] / l[k]);
    }
    want = want + 1L / (direct_product(m, l[j]) * d);
  }
  CHECK(fx::rel(compute_M(l, m).M, want) < 1e-70);

  // τ₂ = ∞ forces M = −τ₁
  const MResult r = compute_M(lam(), mu());
  CHECK(abs(r.M + 1L).to_double() < 1e-9);
  CHECK(r.tail_decay.to_double() < 1e-6);
  // finite τ₂: M = τ₁τ₂/(τ₁ − τ₂)
  const MResult f = compute_M(fx::spectrum2("0.5").eigenvalues, fx::spectrum2("-3").eigenvalues);
  CHECK(abs(f.M - num("-1.5") / num("3.5")).to_double() < 1e-9);
}

TEST_CASE("recovered constants match the forward ones") {
  const MeasureRecovery rec = recover_measure(lam(), mu());
  const std::vector<BigReal>& fwd = *fx::spectrum2("1").normalizing_constants;
  REQUIRE(rec.a.size() == fwd.size());
  CompensatedSum total(fx::kBits);
  for (std::size_t j = 0; j < fwd.size(); ++j) {
    total.add(1L / rec.a[j]);
    if (abs(lam()[j]) < num(1000L)) CHECK(fx::rel(rec.a[j], fwd[j]) < 1e-8);
  }
  CHECK(abs(total.value() - 1L).to_double() < 1e-60);
  CHECK(abs(rec.mass_deficit).to_double() < 1e-3);
  for (const BigReal& w : rec.measure.weights) CHECK(w > 0L);
  CHECK(rec.a_mu.size() == mu().size());
}

TEST_CASE("with every zero of a finite matrix the constants agree to full precision") {
  // At finite N, D + τB is a polynomial of degree N, so the products are exact.
  const JacobiMatrix m = fx::geometric(8);
  const std::vector<BigReal> l = all_zeros(m, "1", 8);
  const std::vector<BigReal> u = all_zeros(m, "inf", 8);
  const MeasureRecovery rec = recover_measure(l, u);
  CHECK(abs(rec.M + 1L) < num("1e-60"));
  for (std::size_t k = 0; k < l.size(); ++k) {
    CHECK(fx::rel(rec.a[k], norm_squared_P(m, l[k], 1e300).value) < 1e-20);
  }
  CHECK(abs(rec.mass_deficit) < num("1e-60"));
}

TEST_CASE("Lanczos on small measures") {
  const RecurrenceCoefficients two = lanczos_recurrence(nums({"-1", "1"}), nums({"0.5", "0.5"}), 5);
  REQUIRE(two.q.size() == 2);
  REQUIRE(two.b.size() == 1);
  CHECK(abs(two.q[0]) < epsilon(250));
  CHECK(abs(two.b[0] - 1L) < epsilon(250));

  const RecurrenceCoefficients three = lanczos_recurrence(nums({"-1", "0", "1"}), nums({"0.25", "0.5", "0.25"}), 3);
  REQUIRE(three.b.size() >= 2);
  CHECK(abs(three.b[0] * three.b[0] - num("0.5")) < epsilon(240));
  CHECK(abs(three.b[1] * three.b[1] - num("0.5")) < epsilon(240));
  for (const BigReal& q : three.q) CHECK(abs(q) < epsilon(240));

  const RecurrenceCoefficients one = lanczos_recurrence(nums({"3"}), nums({"1"}), 4);
  CHECK(one.q.size() == 1);
  CHECK(one.b.empty());
}

TEST_CASE("Lanczos agrees with the Stieltjes procedure") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pos(-20, 20), wt(0.1, 2);
  std::vector<BigReal> x, w;
  for (int i = 0; i < 9; ++i) {
    x.push_back(BigReal::from_double(pos(rng), fx::kBits));
    w.push_back(BigReal::from_double(wt(rng), fx::kBits));
  }
  const RecurrenceCoefficients a = lanczos_recurrence(x, w, 5);
  const RecurrenceCoefficients b = stieltjes(x, w, 5);
  REQUIRE(a.q.size() >= 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(abs(a.q[k] - b.q[k]).to_double() < 1e-50);
  for (std::size_t k = 0; k < 4; ++k) CHECK(fx::rel(a.b[k], b.b[k]) < 1e-50);
}

TEST_CASE("measure_to_matrix preconditions") {
  SpectralMeasure m{nums({"-1", "0", "1"}), nums({"0.25", "0.5", "0.25"}), num(1L)};
  CHECK_NOTHROW(measure_to_matrix(m, 1));
  CHECK_THROWS_AS(measure_to_matrix(m, 2), Error);
  CHECK_THROWS_AS(measure_to_matrix(m, 0), Error);
}

TEST_CASE("reconstruction recovers the geometric matrix and both parameters") {
  const ReconstructionResult r = reconstruct(lam(), mu(), 10);
  CHECK(r.tau1.value().to_double() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.tau2.is_infinite());
  CHECK(r.trusted_length >= 6);
  CHECK(r.matrix.size() == r.trusted_length);
  for (std::size_t k = 1; k <= r.matrix.size(); ++k) {
    const BigReal want = ldexp(num(1L), static_cast<long>(k));
    CHECK(fx::rel(r.matrix.b(k), want) < 1e-8);
    CHECK(abs(r.matrix.q(k) / want).to_double() < 1e-8);
  }
  CHECK(r.full_matrix.size() > r.matrix.size());

  SUBCASE("input order does not matter") {
    std::vector<BigReal> l = lam(), m = mu();
    std::mt19937 rng(3);
    std::shuffle(l.begin(), l.end(), rng);
    std::shuffle(m.begin(), m.end(), rng);
    const ReconstructionResult s = reconstruct(l, m, 10);
    REQUIRE(s.matrix.size() == r.matrix.size());
    for (std::size_t k = 1; k <= r.matrix.size(); ++k) {
      CHECK(s.matrix.b(k) == r.matrix.b(k));
      CHECK(s.matrix.q(k) == r.matrix.q(k));
    }
  }

  SUBCASE("swapping the spectra swaps the parameters") {
    const ReconstructionResult s = reconstruct(mu(), lam(), 10);
    CHECK(s.tau1.is_infinite());
    CHECK(s.tau2.value().to_double() == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t k = 1; k <= std::min(s.matrix.size(), r.matrix.size()); ++k) {
      CHECK(fx::rel(s.matrix.b(k), r.matrix.b(k)) < 1e-8);
    }
  }
}

TEST_CASE("finite and zero second parameters") {
  const ReconstructionResult f = reconstruct(fx::spectrum2("0.5").eigenvalues, fx::spectrum2("-3").eigenvalues, 6);
  CHECK(f.tau1.value().to_double() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(f.tau2.value().to_double() == doctest::Approx(-3.0).epsilon(1e-6));

  const ReconstructionResult z = reconstruct(lam(), fx::spectrum2("0").eigenvalues, 6);
  CHECK(z.tau2.is_zero());
  CHECK(z.tau1.value().to_double() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reconstruction refusals") {
  try {
    reconstruct(fx::spectrum2("0").eigenvalues, mu(), 6);
    FAIL("accepted 0 in lambda");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
    CHECK(e.condition() == "zero-not-in-lambda");
  }

  try {
    reconstruct(nums({"-3", "1", "4"}), nums({"-1", "2", "6"}), 1);
    FAIL("accepted three nodes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewNodes);
  }

  // a missing μ breaks the interlacing, so some weight changes sign
  std::vector<BigReal> holed = mu();
  holed.erase(holed.begin() + static_cast<long>(holed.size() / 2));
  try {
    recover_measure(lam(), holed);
    FAIL("accepted a spectrum with a hole");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::NonPositiveWeight || e.code() == ErrorCode::SignInconsistency));
  }
}

TEST_CASE("over-long requests are clamped with a warning") {
  const ReconstructionResult r = reconstruct(lam(), mu(), 200);
  CHECK(r.diagnostics.clamped);
  CHECK(r.diagnostics.requested_length == 200);
  CHECK_FALSE(r.diagnostics.warnings.empty());
  CHECK(r.matrix.size() <= lam().size() / 3);
  CHECK(r.full_matrix.size() == lam().size() - 1);
}

TEST_CASE("moving one mu across a lambda is caught, moving it inside its gap is not") {
  // Σ 1/ã = 1 holds for any finite lists with the same ordering, so only a change of
  // ordering can surface in the weights.
  std::vector<BigReal> inside = mu();
  const std::size_t j = 19;
  inside[j] = inside[j] * num("1.01");
  const MeasureRecovery rec = recover_measure(lam(), inside);
  CHECK(abs(rec.mass_deficit) < num("1e-60"));

  std::vector<BigReal> across = mu();
  const auto next_lambda = std::upper_bound(lam().begin(), lam().end(), across[j]);
  REQUIRE(next_lambda != lam().end());
  across[j] = *next_lambda + (*next_lambda - across[j]) / 10L;
  REQUIRE(across[j] < across[j + 1]);
  try {
    recover_measure(lam(), across);
    FAIL("accepted a mu moved across a lambda");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::NonPositiveWeight || e.code() == ErrorCode::SignInconsistency));
  }
}
