#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "jts/error.hpp"
#include "jts/inverse.hpp"
#include "jts/validate.hpp"

using namespace jts;
using fx::num;

namespace {

std::vector<BigReal> nums(std::initializer_list<const char*> xs) {
  std::vector<BigReal> out;
  for (const char* x : xs) out.push_back(num(x));
  return out;
}

const ConditionReport& report(const ValidationResult& v, ConditionId id) {
  for (const ConditionReport& r : v.reports) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("missing report");
}

const std::vector<BigReal>& lam() { return fx::spectrum2("1").eigenvalues; }
const std::vector<BigReal>& mu() { return fx::spectrum2("inf").eigenvalues; }

}  // namespace

TEST_CASE("interlacing on small lists") {
  CHECK(check_interlacing(nums({"1", "3"}), nums({"2"})).status == Status::Pass);

  const ConditionReport apart = check_interlacing(nums({"1", "2"}), nums({"5"}));
  CHECK(apart.status == Status::Pass);
  CHECK(apart.detail.find("vacuous") != std::string::npos);

  const ConditionReport bad = check_interlacing(nums({"1", "2", "3"}), nums({"2.5", "2.7"}));
  CHECK(bad.status == Status::Fail);
  REQUIRE(bad.find("witness"));
  CHECK(bad.find("witness")->find("mu pair") != std::string::npos);

  CHECK(check_interlacing(lam(), mu()).status == Status::Pass);
}

TEST_CASE("Mittag-Leffler on the two-node toy") {
  // 𝓡 = 1 − x², 𝓡′(∓1) = ±2
  const std::vector<BigReal> nodes = nums({"-1", "1"});
  const std::vector<BigReal> good = nums({"2", "-2"});
  for (const char* s : {"1", "10", "0.5"}) {
    const Complex z(num(0L), num(s));
    CHECK(mittag_leffler_deviation(nodes, good, z) < epsilon(240));
  }
  CHECK(mittag_leffler_deviation(nodes, good, Complex(num("0.3"), num("0.2"))) < epsilon(240));
  const ConditionReport ok = mittag_leffler_check(nodes, good);
  CHECK(ok.status == Status::Pass);
  REQUIRE(ok.find("deviation_at_i"));

  const ConditionReport off = mittag_leffler_check(nodes, nums({"2", "-3"}));
  CHECK(off.status == Status::Fail);
  CHECK(off.find("witness"));

  CHECK_THROWS_AS(mittag_leffler_deviation(nodes, good, Complex(num(1L))), Error);
}

TEST_CASE("convergence exponent") {
  std::vector<BigReal> arith, geom;
  for (long k = 1; k <= 40; ++k) {
    arith.push_back(num(k));
    geom.push_back(ldexp(num(k % 2 ? -1L : 1L), k));
  }
  const auto [slope_a, ra] = convergence_exponent_estimate(arith);
  CHECK(ra.status == Status::Fail);
  CHECK(slope_a.to_double() == doctest::Approx(1.0).epsilon(0.1));
  REQUIRE(ra.find("witness"));

  const auto [slope_g, rg] = convergence_exponent_estimate(geom);
  CHECK(rg.status == Status::Pass);
  CHECK(slope_g.to_double() < 0.2);

  arith.resize(10);
  try {
    convergence_exponent_estimate(arith);
    FAIL("estimated from ten nodes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewNodes);
  }
}

TEST_CASE("sign constancy") {
  CHECK(check_sign_constancy(lam(), mu()).status == Status::Pass);

  std::vector<BigReal> holed = mu();
  holed.erase(holed.begin() + static_cast<long>(holed.size() / 2));
  const ConditionReport r = check_sign_constancy(lam(), holed);
  CHECK(r.status == Status::Fail);
  REQUIRE(r.find("witness"));
  CHECK(r.find("witness")->find('[') != std::string::npos);

  // with 0 among the μ the signs are fixed, not just constant
  CHECK(check_sign_constancy(lam(), fx::spectrum2("0").eigenvalues).status == Status::Pass);
  const ConditionReport flipped = check_sign_constancy(fx::spectrum2("0.5").eigenvalues, nums({"-1e9", "0", "1e9"}));
  CHECK(flipped.status == Status::Fail);
}

TEST_CASE("moment equalities hold identically on finite lists") {
  // The residue theorem makes both sums cancel for m <= n + n′ − 2, whatever the nodes.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<BigReal> l, m;
    for (int i = 0; i < 6; ++i) l.push_back(BigReal::from_double(u(rng), fx::kBits));
    for (int i = 0; i < 5; ++i) m.push_back(BigReal::from_double(u(rng), fx::kBits));
    const ConditionReport r = check_moment_equalities(l, m, 9);
    CHECK(r.status == Status::Pass);
    REQUIRE(r.find("identity_order"));
    CHECK(*r.find("identity_order") == "9");
  }
  CHECK(check_moment_equalities(lam(), mu()).status == Status::Pass);
}

TEST_CASE("tail series need enough nodes") {
  const auto [c5, c6] = check_series_5_and_6(nums({"-8", "-2", "1", "4", "16", "64"}), nums({"-4", "-1", "2", "8", "32", "128"}));
  CHECK(c5.status == Status::Inconclusive);
  CHECK(c6.status == Status::Inconclusive);

  const auto [g5, g6] = check_series_5_and_6(lam(), mu());
  CHECK(g5.status == Status::Pass);
  CHECK(g6.status == Status::Pass);
}

TEST_CASE("product convergence") {
  CHECK(check_product_convergence(lam(), mu()).status == Status::Pass);
}

TEST_CASE("validate_all on genuine spectra") {
  const ValidationResult v = validate_all(lam(), mu());
  CHECK(v.overall == Status::Pass);
  REQUIRE(v.reports.size() == 8);
  for (const ConditionReport& r : v.reports) CHECK(r.status != Status::Fail);

  // the roles of the two spectra are symmetric when neither contains 0
  const ValidationResult w = validate_all(mu(), lam());
  for (std::size_t i = 0; i < v.reports.size(); ++i) CHECK(w.reports[i].status == v.reports[i].status);

  CHECK(validate_all(fx::spectrum2("0.5").eigenvalues, fx::spectrum2("0").eigenvalues).overall == Status::Pass);
}

TEST_CASE("validate_all catches a deleted eigenvalue") {
  std::vector<BigReal> holed = mu();
  holed.erase(holed.begin() + static_cast<long>(holed.size() / 2));
  const ValidationResult v = validate_all(lam(), holed);
  CHECK(v.overall == Status::Fail);
  CHECK(report(v, ConditionId::C3_SignConstancy).status == Status::Fail);
  CHECK(report(v, ConditionId::Interlacing).status == Status::Fail);
  CHECK(report(v, ConditionId::C4_MomentEquality).status != Status::Fail);
}

TEST_CASE("hypotheses are checked before anything else") {
  const auto code_and_condition = [](const std::vector<BigReal>& l, const std::vector<BigReal>& m) {
    try {
      validate_all(l, m);
    } catch (const Error& e) {
      return std::make_pair(e.code(), e.condition());
    }
    return std::make_pair(ErrorCode::InvariantViolated, std::string("none"));
  };
  std::vector<BigReal> dup = mu();
  dup.push_back(dup[5]);
  CHECK(code_and_condition(lam(), dup) == std::make_pair(ErrorCode::HypothesisViolated, std::string("distinct-elements")));
  CHECK(code_and_condition(fx::spectrum2("0").eigenvalues, mu()) ==
        std::make_pair(ErrorCode::HypothesisViolated, std::string("disjoint-zero-free")));
  std::vector<BigReal> shared = mu();
  shared[3] = lam()[4];
  std::sort(shared.begin(), shared.end());
  CHECK(code_and_condition(lam(), shared) ==
        std::make_pair(ErrorCode::HypothesisViolated, std::string("disjoint-zero-free")));
}

TEST_CASE("passing sign constancy means positive recovered weights") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-40, 40);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> spot(0, 13);
  constexpr std::size_t pts_none = 99;
  int passed = 0, failed = 0;
  for (int trial = 0; trial < 40; ++trial) {
    // alternate sorted points between the lists; every other trial moves one point across
    const std::size_t moved = coin(rng) ? spot(rng) : pts_none;
    std::vector<double> pts(14);
    for (double& p : pts) p = u(rng);
    std::sort(pts.begin(), pts.end());
    std::vector<BigReal> l, m;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const bool to_l = (i % 2 == 0) != (i == moved);
      (to_l ? l : m).push_back(BigReal::from_double(pts[i], fx::kBits));
    }
    if (l.empty() || m.empty()) continue;
    if (check_sign_constancy(l, m).status != Status::Pass) {
      ++failed;
      continue;
    }
    ++passed;
    try {
      const MeasureRecovery rec = recover_measure(l, m, 1.0);
      for (const BigReal& w : rec.measure.weights) CHECK(w > 0L);
    } catch (const Error& e) {
      CHECK(e.code() != ErrorCode::NonPositiveWeight);
    }
  }
  CHECK(passed > 5);
  CHECK(failed > 5);
}
