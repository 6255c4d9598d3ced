#include "jts/inverse.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "jts/error.hpp"
#include "jts/nevanlinna.hpp"

namespace jts {

namespace {

constexpr Precision kGuardBits = 64;

Precision precision_of(const std::vector<BigReal>& xs) {
  Precision p = kMinPrecisionBits;
  for (const BigReal& x : xs) p = std::max(p, x.precision());
  return p;
}

std::vector<BigReal> sorted_copy(std::vector<BigReal> xs) {
  std::sort(xs.begin(), xs.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
  return xs;
}

bool has_duplicates(const std::vector<BigReal>& sorted) {
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) return true;
  }
  return false;
}

bool contains_zero(const std::vector<BigReal>& xs) {
  return std::any_of(xs.begin(), xs.end(), [](const BigReal& x) { return x.is_zero(); });
}

// Π (1 − x/ν) over the nonzero nodes except `skip`, accumulated with guard bits in
// ascending |ν| order.
BigReal guarded_product(const ProductFunction& f, const BigReal& x, std::size_t skip) {
  const Precision bits = std::max(f.precision(), x.precision());
  const Precision wide = bits + kGuardBits;
  const BigReal xw = x.with_precision(wide);
  BigReal acc(1L, wide);
  for (std::size_t k : magnitude_order(f.nodes)) {
    if (k == skip || f.nodes[k].is_zero()) continue;
    acc *= 1L - xw / f.nodes[k].with_precision(wide);
  }
  return acc.with_precision(bits);
}

struct Terms {
  std::vector<std::size_t> order;  // magnitude order of λ
  std::vector<BigReal> t;          // R_μ(λ_j) R′_λ(λ_j), indexed like the sorted λ
};

Terms coupling_terms(const ProductFunction& rl, const ProductFunction& rm) {
  Terms out;
  out.order = magnitude_order(rl.nodes);
  out.t.reserve(rl.nodes.size());
  for (std::size_t j = 0; j < rl.nodes.size(); ++j) {
    out.t.push_back(product_eval(rm, rl.nodes[j]) * product_derivative_at_node(rl, j));
  }
  return out;
}

MResult sum_reciprocals(const Terms& terms, Precision bits) {
  CompensatedSum s(bits);
  std::vector<BigReal> recips;
  for (std::size_t j : terms.order) {
    recips.push_back(1L / terms.t[j]);
    s.add(recips.back());
  }
  MResult r{s.value(), BigReal(0L, bits)};
  const std::size_t n = recips.size();
  BigReal last = abs(recips.back());
  if (n >= 2) last = max(last, abs(recips[n - 2]));
  r.tail_decay = r.M.is_zero() ? BigReal::infinity(1, bits) : last / abs(r.M);
  return r;
}

void require_disjoint(const std::vector<BigReal>& a, const std::vector<BigReal>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      throw Error(ErrorCode::PreconditionViolated, "spectra share the point " + a[i].to_string(12), "disjointness");
    }
    if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
}

void require_inputs(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu) {
  if (lambda.empty()) throw Error(ErrorCode::TooFewNodes, "λ list is empty");
  if (contains_zero(lambda)) {
    throw Error(ErrorCode::PreconditionViolated, "0 must not belong to the λ spectrum", "zero-not-in-lambda");
  }
  if (has_duplicates(lambda) || has_duplicates(mu)) {
    throw Error(ErrorCode::PreconditionViolated, "spectra must have distinct elements", "distinct-elements");
  }
  require_disjoint(lambda, mu);
}

}  // namespace

ProductFunction ProductFunction::from_nodes(std::vector<BigReal> nodes, std::optional<BigReal> trust_radius) {
  ProductFunction f;
  f.nodes = sorted_copy(std::move(nodes));
  if (has_duplicates(f.nodes)) throw Error(ErrorCode::HypothesisViolated, "repeated node", "distinct-elements");
  f.has_zero_node = contains_zero(f.nodes);
  f.trust_radius = trust_radius ? *trust_radius : BigReal::infinity(1, precision_of(f.nodes));
  return f;
}

Precision ProductFunction::precision() const { return precision_of(nodes); }

std::size_t ProductFunction::zero_index() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_zero()) return i;
  }
  throw Error(ErrorCode::IndexOutOfRange, "product has no zero node");
}

std::vector<std::size_t> magnitude_order(const std::vector<BigReal>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<BigReal> mags;
  mags.reserve(xs.size());
  for (const BigReal& x : xs) mags.push_back(abs(x));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (mags[i] < mags[j]) return true;
    if (mags[j] < mags[i]) return false;
    return xs[i] < xs[j];
  });
  return order;
}

BigReal product_eval(const ProductFunction& f, const BigReal& x) {
  if (!(abs(x) < f.trust_radius)) {
    throw Error(ErrorCode::OutsideTrustRadius,
                "product evaluated at " + x.to_string(12) + " beyond trust radius " + f.trust_radius.to_string(8));
  }
  BigReal v = guarded_product(f, x, f.nodes.size());
  if (f.has_zero_node) v *= x;
  return v;
}

BigReal product_derivative_at_node(const ProductFunction& f, std::size_t j) {
  if (j >= f.nodes.size()) throw Error(ErrorCode::IndexOutOfRange, "node index " + std::to_string(j));
  const BigReal& lj = f.nodes[j];
  if (lj.is_zero()) return BigReal(1L, f.precision());
  BigReal v = -guarded_product(f, lj, j);
  // −λ_j^{δ−1} Π_{k≠j}(1 − λ_j/λ_k)
  if (!f.has_zero_node) v /= lj;
  return v;
}

MResult compute_M(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in) {
  const std::vector<BigReal> lambda = sorted_copy(lambda_in);
  const std::vector<BigReal> mu = sorted_copy(mu_in);
  require_inputs(lambda, mu);
  const ProductFunction rl = ProductFunction::from_nodes(lambda);
  const ProductFunction rm = ProductFunction::from_nodes(mu);
  const Terms terms = coupling_terms(rl, rm);

  long pos = 0, neg = 0;
  for (const BigReal& t : terms.t) (t.sign() > 0 ? pos : neg) += 1;
  if (pos > 0 && neg > 0) {
    const int minority = pos < neg ? 1 : -1;
    long witness = 0;
    for (std::size_t j = 0; j < terms.t.size(); ++j) {
      if (terms.t[j].sign() == minority) {
        witness = static_cast<long>(j);
        break;
      }
    }
    throw Error(ErrorCode::SignInconsistency,
                "R_mu(lambda_j) R'_lambda(lambda_j) changes sign at lambda = " + lambda[witness].to_string(12),
                "sign-constancy", witness);
  }
  MResult r = sum_reciprocals(terms, precision_of(lambda));
  if (lambda.size() >= 4 && r.tail_decay.to_double() > kDivergentTailThreshold) {
    throw Error(ErrorCode::DivergentTail, "terms of the M series are not decaying (last/sum " +
                                              r.tail_decay.to_string(6) + ")", "moment-convergence");
  }
  return r;
}

MeasureRecovery recover_measure(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in,
                                double deficit_threshold) {
  const std::vector<BigReal> lambda = sorted_copy(lambda_in);
  const std::vector<BigReal> mu = sorted_copy(mu_in);
  require_inputs(lambda, mu);
  const Precision bits = precision_of(lambda);
  const ProductFunction rl = ProductFunction::from_nodes(lambda);
  const ProductFunction rm = ProductFunction::from_nodes(mu);
  const Terms terms = coupling_terms(rl, rm);
  const MResult mr = sum_reciprocals(terms, bits);
  if (lambda.size() >= 4 && mr.tail_decay.to_double() > kDivergentTailThreshold) {
    throw Error(ErrorCode::DivergentTail, "terms of the M series are not decaying (last/sum " +
                                              mr.tail_decay.to_string(6) + ")", "moment-convergence");
  }

  MeasureRecovery out;
  out.M = mr.M;
  out.M_tail_decay = mr.tail_decay;
  out.measure.nodes = lambda;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    BigReal a = mr.M * terms.t[j];
    if (a.sign() <= 0) {
      throw Error(ErrorCode::NonPositiveWeight, "normalizing constant at lambda = " + lambda[j].to_string(12) +
                                                    " is not positive", "sign-constancy", static_cast<long>(j));
    }
    out.measure.weights.push_back(1L / a);
    out.a.push_back(std::move(a));
  }
  CompensatedSum mass(bits);
  for (std::size_t j : terms.order) mass.add(out.measure.weights[j]);
  out.measure.total_mass = mass.value();

  CompensatedSum mu_mass(bits);
  out.a_mu.resize(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    out.a_mu[j] = -mr.M * product_eval(rl, mu[j]) * product_derivative_at_node(rm, j);
    if (out.a_mu[j].sign() <= 0) {
      throw Error(ErrorCode::NonPositiveWeight, "normalizing constant at mu = " + mu[j].to_string(12) +
                                                    " is not positive", "sign-constancy", static_cast<long>(j));
    }
  }
  for (std::size_t j : magnitude_order(mu)) mu_mass.add(1L / out.a_mu[j]);
  out.mass_deficit = 1L - mu_mass.value();
  if (abs(out.mass_deficit).to_double() > deficit_threshold) {
    throw Error(ErrorCode::MassDeficit, "mass of the mu-side measure misses one by " + out.mass_deficit.to_string(6),
                "moment-equalities");
  }
  return out;
}

RecurrenceCoefficients lanczos_recurrence(const std::vector<BigReal>& nodes, const std::vector<BigReal>& weights,
                                          std::size_t steps) {
  if (nodes.size() != weights.size() || nodes.empty()) {
    throw Error(ErrorCode::PreconditionViolated, "nodes and weights must be nonempty and of equal length");
  }
  const Precision bits = std::max(precision_of(nodes), precision_of(weights));
  const Precision wide = bits + kGuardBits;
  const std::size_t m = nodes.size();

  std::vector<BigReal> x;
  BigReal scale(1L, wide);
  for (const BigReal& v : nodes) {
    x.push_back(v.with_precision(wide));
    scale = max(scale, abs(x.back()));
  }
  const BigReal tiny = scale * epsilon(bits / 2);

  const auto dot = [&](const std::vector<BigReal>& a, const std::vector<BigReal>& b) {
    CompensatedSum s(wide);
    for (std::size_t i = 0; i < m; ++i) s.add(a[i] * b[i]);
    return s.value();
  };

  std::vector<std::vector<BigReal>> basis;
  std::vector<BigReal> u;
  CompensatedSum wsum(wide);
  for (const BigReal& w : weights) {
    if (w.sign() <= 0) throw Error(ErrorCode::NonPositiveWeight, "measure weight must be positive");
    u.push_back(sqrt(w.with_precision(wide)));
    wsum.add(w.with_precision(wide));
  }
  const BigReal norm0 = sqrt(wsum.value());
  for (BigReal& v : u) v /= norm0;

  RecurrenceCoefficients out;
  for (std::size_t k = 0; k < steps && k < m; ++k) {
    std::vector<BigReal> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = x[i] * u[i];
    const BigReal alpha = dot(u, r);
    out.q.push_back(alpha.with_precision(bits));
    basis.push_back(u);
    // Two passes of classical Gram–Schmidt against every previous vector.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : basis) {
        const BigReal c = dot(v, r);
        for (std::size_t i = 0; i < m; ++i) r[i] -= c * v[i];
      }
    }
    const BigReal beta = sqrt(dot(r, r));
    if (beta <= tiny || k + 1 == m) break;
    out.b.push_back(beta.with_precision(bits));
    for (std::size_t i = 0; i < m; ++i) u[i] = r[i] / beta;
  }
  return out;
}

JacobiMatrix measure_to_matrix(const SpectralMeasure& measure, std::size_t target_length) {
  if (target_length == 0) throw Error(ErrorCode::PreconditionViolated, "target length must be positive");
  if (measure.nodes.size() < 3 * target_length) {
    throw Error(ErrorCode::PreconditionViolated,
                std::to_string(measure.nodes.size()) + " nodes support at most " +
                    std::to_string(measure.nodes.size() / 3) + " coefficient pairs",
                "node-count");
  }
  RecurrenceCoefficients rc = lanczos_recurrence(measure.nodes, measure.weights, target_length);
  if (rc.b.size() < target_length) {
    const std::size_t step = rc.b.size() + 1;
    throw Error(ErrorCode::BreakdownAtStep, "recurrence broke down at step " + std::to_string(step), "",
                static_cast<long>(step));
  }
  rc.q.resize(target_length);
  rc.b.resize(target_length);
  return JacobiMatrix(std::move(rc.b), std::move(rc.q), precision_of(measure.nodes), 1);
}

TauRecovery recover_taus(const JacobiMatrix& matrix, const std::vector<BigReal>& lambda, const BigReal& M,
                         bool mu_contains_zero, const TauOptions& opts) {
  if (lambda.empty()) throw Error(ErrorCode::TooFewNodes, "no λ nodes for the τ estimate");
  const Precision bits = matrix.precision();
  const Nevanlinna nev(matrix);
  const std::vector<std::size_t> order = magnitude_order(lambda);
  const std::size_t count = std::min(opts.estimate_count, lambda.size());

  // Work with B/D = −1/τ₁ first: it stays bounded on the infinite branch.
  std::vector<BigReal> inv;
  for (std::size_t i = 0; i < count; ++i) {
    auto [d, b] = nev.DB(lambda[order[i]]);
    inv.push_back(b / d);
  }
  const auto median = [](std::vector<BigReal> v) {
    std::sort(v.begin(), v.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2L;
  };
  const auto spread = [](const std::vector<BigReal>& v, const BigReal& scale) {
    BigReal lo = v.front(), hi = v.front();
    for (const BigReal& x : v) {
      lo = min(lo, x);
      hi = max(hi, x);
    }
    return (hi - lo) / scale;
  };

  TauRecovery out;
  const BigReal inv_med = median(inv);
  if (abs(inv_med).to_double() < opts.infinity_tolerance) {
    out.tau1 = ExtensionParameter::infinity();
    out.tau1_estimates = inv;
    out.spread = spread(inv, BigReal(1L, bits));
    if (out.spread.to_double() > opts.infinity_tolerance) {
      throw Error(ErrorCode::InconsistentTauEstimates, "B/D at the smallest eigenvalues spreads by " +
                                                           out.spread.to_string(6));
    }
  } else {
    for (const BigReal& r : inv) out.tau1_estimates.push_back(-1L / r);
    const BigReal t1 = median(out.tau1_estimates);
    out.spread = spread(out.tau1_estimates, max(BigReal(1L, bits), abs(t1)));
    if (out.spread.to_double() > opts.spread_tolerance) {
      throw Error(ErrorCode::InconsistentTauEstimates, "−D/B at the smallest eigenvalues spreads by " +
                                                           out.spread.to_string(6));
    }
    out.tau1 = ExtensionParameter::finite(t1);
  }

  if (mu_contains_zero) {
    out.tau2 = ExtensionParameter::finite(BigReal(0L, bits));
  } else if (out.tau1.is_infinite()) {
    out.tau2 = ExtensionParameter::finite(M);
  } else {
    const BigReal& t1 = out.tau1.value();
    const BigReal gap = abs(M + t1);
    if (gap < BigReal::from_double(opts.branch_tolerance, bits) * max(BigReal(1L, bits), abs(t1))) {
      out.tau2 = ExtensionParameter::infinity();
    } else {
      out.tau2 = ExtensionParameter::finite(M * t1 / (t1 + M));
    }
  }
  return out;
}

ReconstructionResult reconstruct(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in,
                                 std::size_t target_length, const ReconstructOptions& opts) {
  const std::vector<BigReal> lambda = sorted_copy(lambda_in);
  const std::vector<BigReal> mu = sorted_copy(mu_in);
  require_inputs(lambda, mu);
  if (lambda.size() < 4) {
    throw Error(ErrorCode::TooFewNodes, "reconstruction needs at least 4 λ nodes, got " + std::to_string(lambda.size()));
  }
  if (target_length == 0) throw Error(ErrorCode::PreconditionViolated, "target length must be positive");
  const Precision bits = precision_of(lambda);
  const std::size_t m = lambda.size();

  ReconstructionResult res;
  ReconstructionDiagnostics& diag = res.diagnostics;
  diag.requested_length = target_length;
  diag.lambda_count = m;
  diag.mu_count = mu.size();

  const MeasureRecovery rec = recover_measure(lambda, mu, opts.deficit_threshold);
  res.M = rec.M;
  diag.mass_deficit = rec.mass_deficit;
  diag.M_tail_decay = rec.M_tail_decay;

  RecurrenceCoefficients full = lanczos_recurrence(rec.measure.nodes, rec.measure.weights, m - 1);
  full.q.resize(full.b.size());
  res.full_matrix = JacobiMatrix(full.b, full.q, bits, 1);

  std::size_t trusted = std::min(target_length, m / 3);
  if (trusted < target_length) {
    diag.clamped = true;
    diag.warnings.push_back("requested " + std::to_string(target_length) + " coefficient pairs, " +
                            std::to_string(m) + " nodes support " + std::to_string(m / 3));
  }
  trusted = std::min(trusted, full.b.size());

  // Prefix stability: rebuild from the data with the largest-magnitude nodes removed.
  const std::size_t drop = opts.stability_drop;
  if (m >= drop + 4 && mu.size() > drop) {
    const auto trim = [drop](const std::vector<BigReal>& xs) {
      std::vector<std::size_t> order = magnitude_order(xs);
      order.resize(xs.size() - drop);
      std::vector<BigReal> kept;
      for (std::size_t i : order) kept.push_back(xs[i]);
      return sorted_copy(std::move(kept));
    };
    try {
      const MeasureRecovery small = recover_measure(trim(lambda), trim(mu), 1.0);
      const RecurrenceCoefficients rc = lanczos_recurrence(small.measure.nodes, small.measure.weights, trusted);
      const BigReal tol = BigReal::from_double(opts.stability_tolerance, bits);
      std::size_t stable = 0;
      bool broken = false;
      for (std::size_t k = 0; k < trusted; ++k) {
        CoefficientStability cs;
        cs.n = k + 1;
        if (k < rc.b.size()) {
          cs.b_change = abs(rc.b[k] - full.b[k]) / full.b[k];
          cs.q_change = abs(rc.q[k] - full.q[k]) / max(abs(full.q[k]), full.b[k]);
        } else {
          cs.b_change = cs.q_change = BigReal::infinity(1, bits);
        }
        if (!broken && cs.b_change <= tol && cs.q_change <= tol) {
          stable = k + 1;
        } else {
          broken = true;
        }
        diag.stability.push_back(std::move(cs));
      }
      if (stable < trusted) {
        diag.warnings.push_back("coefficients beyond n = " + std::to_string(stable) +
                                " change under removal of the largest nodes; trusted length cut");
      }
      trusted = stable;
    } catch (const Error& e) {
      diag.warnings.push_back(std::string("prefix stability check unavailable: ") + e.what());
    }
  } else {
    diag.warnings.push_back("too few nodes for the prefix stability check");
  }

  res.trusted_length = trusted;
  res.matrix = JacobiMatrix(std::vector<BigReal>(full.b.begin(), full.b.begin() + static_cast<long>(trusted)),
                            std::vector<BigReal>(full.q.begin(), full.q.begin() + static_cast<long>(trusted)), bits, 0);

  const TauRecovery taus = recover_taus(res.full_matrix, lambda, res.M, contains_zero(mu), opts.tau);
  res.tau1 = taus.tau1;
  res.tau2 = taus.tau2;
  diag.tau1_estimates = taus.tau1_estimates;
  diag.tau_spread = taus.spread;
  return res;
}

}  // namespace jts
