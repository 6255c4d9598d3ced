#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jts/core.hpp"

namespace jts {

// R(x) = x^δ Π_{ν ≠ 0} (1 − x/ν) over the supplied zeros.
struct ProductFunction {
  std::vector<BigReal> nodes;  // strictly increasing
  bool has_zero_node = false;
  BigReal trust_radius;        // +inf when unrestricted

  // Sorts, rejects duplicates (HypothesisViolated) and sets has_zero_node.
  static ProductFunction from_nodes(std::vector<BigReal> nodes, std::optional<BigReal> trust_radius = std::nullopt);
  Precision precision() const;
  std::size_t zero_index() const;  // index of the node 0; only valid when has_zero_node
};

// Throws OutsideTrustRadius when |x| >= trust_radius.
BigReal product_eval(const ProductFunction& f, const BigReal& x);
// R′ at nodes[j] in closed form; 1 at the node 0.
BigReal product_derivative_at_node(const ProductFunction& f, std::size_t j);

// Order used for every accumulation over nodes: ascending |x|, negatives first on ties.
std::vector<std::size_t> magnitude_order(const std::vector<BigReal>& xs);

struct MResult {
  BigReal M;
  BigReal tail_decay;  // largest of the last two |terms| over |M|
};

inline constexpr double kDivergentTailThreshold = 0.5;

// M = Σ_j 1/(R_μ(λ_j) R′_λ(λ_j)). Throws SignInconsistency, DivergentTail.
MResult compute_M(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu);

struct SpectralMeasure {
  std::vector<BigReal> nodes;
  std::vector<BigReal> weights;
  BigReal total_mass;
};

struct MeasureRecovery {
  SpectralMeasure measure;
  std::vector<BigReal> a;      // normalizing constants at λ
  std::vector<BigReal> a_mu;   // ã_j = −M R_λ(μ_j) R′_μ(μ_j)
  BigReal M;
  BigReal M_tail_decay;
  // 1 − Σ 1/ã_j. Σ 1/a_j is one by construction, so the μ side carries the information.
  BigReal mass_deficit;
};

inline constexpr double kMassDeficitThreshold = 1e-3;

// Throws NonPositiveWeight or MassDeficit on top of compute_M's errors.
MeasureRecovery recover_measure(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu,
                                double deficit_threshold = kMassDeficitThreshold);

struct RecurrenceCoefficients {
  std::vector<BigReal> q;  // q_1..
  std::vector<BigReal> b;  // b_1..
};

// Lanczos with full reorthogonalization on diag(nodes) started from sqrt(weights).
// Runs at most `steps` steps and stops early when the Krylov space is exhausted, so a
// one-node measure yields q_1 only.
RecurrenceCoefficients lanczos_recurrence(const std::vector<BigReal>& nodes, const std::vector<BigReal>& weights,
                                          std::size_t steps);

// q_1..q_L, b_1..b_L of the measure. Requires node_count >= 3L (PreconditionViolated);
// throws BreakdownAtStep when some b_k collapses.
JacobiMatrix measure_to_matrix(const SpectralMeasure& measure, std::size_t target_length);

struct TauOptions {
  std::size_t estimate_count = 5;
  double infinity_tolerance = 1e-8;  // median |B/D| below this means τ₁ = ∞
  double spread_tolerance = 1e-6;
  double branch_tolerance = 1e-10;   // |M + τ₁| < tol·max(1, |τ₁|) means τ₂ = ∞
};

struct TauRecovery {
  ExtensionParameter tau1 = ExtensionParameter::infinity();
  ExtensionParameter tau2 = ExtensionParameter::infinity();
  std::vector<BigReal> tau1_estimates;  // −D(λ*)/B(λ*), or B/D when the infinite branch was taken
  BigReal spread;
};

TauRecovery recover_taus(const JacobiMatrix& matrix, const std::vector<BigReal>& lambda, const BigReal& M,
                         bool mu_contains_zero, const TauOptions& opts = {});

struct CoefficientStability {
  std::size_t n = 0;
  BigReal b_change;  // relative change of b_n between the m and m−4 reconstructions
  BigReal q_change;  // change of q_n relative to max(|q_n|, b_n)
};

struct ReconstructionDiagnostics {
  std::size_t requested_length = 0;
  std::size_t lambda_count = 0;
  std::size_t mu_count = 0;
  bool clamped = false;  // requested length exceeded node_count/3
  BigReal mass_deficit;
  BigReal M_tail_decay;
  std::vector<CoefficientStability> stability;
  std::vector<BigReal> tau1_estimates;
  BigReal tau_spread;
  std::vector<std::string> warnings;
};

struct ReconstructionResult {
  JacobiMatrix matrix;       // trusted prefix, trusted_length entries
  JacobiMatrix full_matrix;  // every coefficient the data supports (m − 1 entries)
  ExtensionParameter tau1 = ExtensionParameter::infinity();
  ExtensionParameter tau2 = ExtensionParameter::infinity();
  BigReal M;
  std::size_t trusted_length = 0;
  ReconstructionDiagnostics diagnostics;
};

struct ReconstructOptions {
  double stability_tolerance = 1e-8;
  std::size_t stability_drop = 4;
  double deficit_threshold = kMassDeficitThreshold;
  TauOptions tau;
};

ReconstructionResult reconstruct(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu,
                                 std::size_t target_length, const ReconstructOptions& opts = {});

}  // namespace jts
