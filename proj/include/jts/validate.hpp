#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jts/bigreal.hpp"

namespace jts {

enum class ConditionId {
  C1_ConvergenceExponent,
  C2_ProductConvergence,
  C3_SignConstancy,
  C4_MomentEquality,
  C5_SeriesDivergence,
  C6_WeightedConvergence,
  Interlacing,
  MittagLeffler,
};

enum class Status { Pass, Fail, Inconclusive };

const char* to_string(ConditionId id);
// Content name used in reports and error objects, e.g. "sign-constancy".
const char* condition_name(ConditionId id);
const char* to_string(Status s);

struct ConditionReport {
  ConditionId id = ConditionId::C1_ConvergenceExponent;
  Status status = Status::Inconclusive;
  // Ordered key/value pairs; a Fail always carries a "witness" entry.
  std::vector<std::pair<std::string, std::string>> evidence;
  std::string detail;

  void add(std::string key, std::string value) { evidence.emplace_back(std::move(key), std::move(value)); }
  const std::string* find(const std::string& key) const;
};

struct ValidateOptions {
  double exponent_slack = 0.1;
  double moment_tolerance = 1e-10;
  int m_max = 8;
  double mittag_leffler_tolerance = 1e-8;
  std::size_t min_trend_nodes = 8;
  int max_inconclusive = 2;
};

// Least-squares slope of log(rank) against log|ν| over the outer half of the nonzero
// nodes, plus the n(r)/r density trend. Throws TooFewNodes under 16 nonzero nodes.
std::pair<BigReal, ConditionReport> convergence_exponent_estimate(const std::vector<BigReal>& nodes,
                                                                  const ValidateOptions& opts = {});

ConditionReport check_product_convergence(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu,
                                          const ValidateOptions& opts = {});

ConditionReport check_sign_constancy(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu);

ConditionReport check_moment_equalities(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu,
                                        int m_max = 8, const ValidateOptions& opts = {});

std::pair<ConditionReport, ConditionReport> check_series_5_and_6(const std::vector<BigReal>& lambda,
                                                                 const std::vector<BigReal>& mu,
                                                                 const ValidateOptions& opts = {});

ConditionReport check_interlacing(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu);

// Compares 1/𝓡(ζ) with Σ_j 1/(𝓡′(κ_j)(ζ − κ_j)) where 𝓡 is the product over `nodes` and
// derivs[j] is the caller's value of 𝓡′ at nodes[j]. Samples gap midpoints in the inner
// half of the nodes and ±i·s. Throws SamplePointTooCloseToNode.
ConditionReport mittag_leffler_check(const std::vector<BigReal>& nodes, const std::vector<BigReal>& derivs,
                                     const ValidateOptions& opts = {});

// Deviation at a single complex point; used by tests and the report above.
BigReal mittag_leffler_deviation(const std::vector<BigReal>& nodes, const std::vector<BigReal>& derivs,
                                 const Complex& zeta);

struct ValidationResult {
  std::vector<ConditionReport> reports;  // fixed ConditionId order
  Status overall = Status::Inconclusive;
  std::vector<std::string> notes;
};

// Checks the hypotheses first and throws HypothesisViolated naming the broken one:
// "disjoint-zero-free" (shared points, or 0 among the λ) or "distinct-elements".
ValidationResult validate_all(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu,
                              const ValidateOptions& opts = {});

}  // namespace jts
