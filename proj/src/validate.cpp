#include "jts/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jts/error.hpp"
#include "jts/inverse.hpp"

namespace jts {

namespace {

std::string num(const BigReal& x) { return x.to_string(12); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<BigReal> sorted_copy(std::vector<BigReal> xs) {
  std::sort(xs.begin(), xs.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
  return xs;
}

std::vector<BigReal> nonzero(const std::vector<BigReal>& xs) {
  std::vector<BigReal> out;
  for (const BigReal& x : xs) {
    if (!x.is_zero()) out.push_back(x);
  }
  return out;
}

Precision precision_of(const std::vector<BigReal>& a, const std::vector<BigReal>& b = {}) {
  Precision p = kMinPrecisionBits;
  for (const BigReal& x : a) p = std::max(p, x.precision());
  for (const BigReal& x : b) p = std::max(p, x.precision());
  return p;
}

Status worst(Status a, Status b) {
  if (a == Status::Fail || b == Status::Fail) return Status::Fail;
  if (a == Status::Inconclusive || b == Status::Inconclusive) return Status::Inconclusive;
  return Status::Pass;
}

// R_other(x_j) R′_self(x_j) for every node of `self`, in the sorted order of self.nodes.
std::vector<BigReal> coupling(const ProductFunction& self, const ProductFunction& other) {
  std::vector<BigReal> out;
  out.reserve(self.nodes.size());
  for (std::size_t j = 0; j < self.nodes.size(); ++j) {
    out.push_back(product_eval(other, self.nodes[j]) * product_derivative_at_node(self, j));
  }
  return out;
}

struct Trend {
  double ratio = 0;  // (t_{n-1}+t_{n-2})/(t_{n-3}+t_{n-4}) of |terms| in magnitude order
  double share = 0;  // (t_{n-1}+t_{n-2}) / |partial sum|
  bool single_signed = true;
  BigReal partial_sum;
};

Trend trend_of(const std::vector<BigReal>& terms_in_order) {
  Trend t;
  const std::size_t n = terms_in_order.size();
  const Precision bits = precision_of(terms_in_order);
  CompensatedSum s(bits);
  int sign = 0;
  for (const BigReal& x : terms_in_order) {
    s.add(x);
    if (sign == 0) sign = x.sign();
    if (x.sign() != 0 && x.sign() != sign) t.single_signed = false;
  }
  t.partial_sum = s.value();
  const auto mag = [&](std::size_t k) { return abs(terms_in_order[k]); };
  const BigReal head = mag(n - 1) + mag(n - 2);
  const BigReal prev = mag(n - 3) + mag(n - 4);
  t.ratio = prev.is_zero() ? HUGE_VAL : (head / prev).to_double();
  t.share = t.partial_sum.is_zero() ? HUGE_VAL : (head / abs(t.partial_sum)).to_double();
  return t;
}

void add_trend(ConditionReport& r, const std::string& side, const Trend& t) {
  r.add(side + ".partial_sum", num(t.partial_sum));
  r.add(side + ".tail_ratio", num(t.ratio));
  r.add(side + ".tail_share", num(t.share));
}

std::pair<BigReal, ConditionReport> exponent_impl(const std::vector<BigReal>& nodes_in, const ValidateOptions& opts) {
  const std::vector<BigReal> nodes = nonzero(nodes_in);
  const Precision bits = precision_of(nodes_in);
  ConditionReport r;
  r.id = ConditionId::C1_ConvergenceExponent;
  if (nodes.size() < 16) {
    throw Error(ErrorCode::TooFewNodes,
                "convergence exponent needs 16 nonzero nodes, got " + std::to_string(nodes.size()));
  }
  const std::vector<std::size_t> order = magnitude_order(nodes);
  const std::size_t n = nodes.size();
  const std::size_t start = n / 2;

  // Regression of log n(r) on log r at r = |ν_k|, rank k counted from one.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = start; i < n; ++i) {
    const double lx = log(abs(nodes[order[i]])).to_double();
    const double ly = std::log(static_cast<double>(i + 1));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double cnt = static_cast<double>(n - start);
  const double var = cnt * sxx - sx * sx;
  const double slope = var > 0 ? (cnt * sxy - sx * sy) / var : HUGE_VAL;
  BigReal estimate = BigReal::from_double(slope, bits);

  CompensatedSum recip(bits);
  for (std::size_t i : order) recip.add(1L / abs(nodes[i]));
  const BigReal last_recip = 1L / abs(nodes[order[n - 1]]);
  const double recip_share = (last_recip / recip.value()).to_double();
  const double density_first = static_cast<double>(start + 1) / abs(nodes[order[start]]).to_double();
  const double density_last = static_cast<double>(n) / abs(nodes[order[n - 1]]).to_double();

  r.add("exponent", num(slope));
  r.add("reciprocal_sum", num(recip.value()));
  r.add("reciprocal_tail_share", num(recip_share));
  r.add("density_outer_start", num(density_first));
  r.add("density_last", num(density_last));

  const bool still_growing = recip_share > 1e-3;
  const bool density_vanishing = density_last < 0.5 * density_first;
  if (slope > 1.0 + opts.exponent_slack) {
    r.status = Status::Fail;
    r.add("witness", "exponent=" + num(slope));
    r.detail = "counting function grows faster than r^(1+slack)";
  } else if (still_growing && !density_vanishing) {
    r.status = Status::Fail;
    r.add("witness", "n(r)/r=" + num(density_last) + " at r=" + num(abs(nodes[order[n - 1]])));
    r.detail = "reciprocal sum still growing while n(r)/r does not tend to zero";
  } else {
    r.status = Status::Pass;
    r.detail = still_growing ? "reciprocal sum growing, density decays" : "reciprocal sum settles";
  }
  return {std::move(estimate), std::move(r)};
}

void require_hypotheses(const std::vector<BigReal>& lambda, const std::vector<BigReal>& mu) {
  for (const auto* list : {&lambda, &mu}) {
    for (std::size_t i = 1; i < list->size(); ++i) {
      if ((*list)[i] == (*list)[i - 1]) {
        throw Error(ErrorCode::HypothesisViolated, "repeated element " + num((*list)[i]), "distinct-elements",
                    static_cast<long>(i));
      }
    }
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i].is_zero()) {
      throw Error(ErrorCode::HypothesisViolated, "0 belongs to the λ list", "disjoint-zero-free", static_cast<long>(i));
    }
  }
  std::size_t i = 0, j = 0;
  while (i < lambda.size() && j < mu.size()) {
    if (lambda[i] == mu[j]) {
      throw Error(ErrorCode::HypothesisViolated, "λ and μ share " + num(lambda[i]), "disjoint-zero-free",
                  static_cast<long>(i));
    }
    if (lambda[i] < mu[j]) {
      ++i;
    } else {
      ++j;
    }
  }
}

Complex product_at(const std::vector<BigReal>& nodes, const Complex& z) {
  const Precision bits = z.precision();
  Complex acc(BigReal(1L, bits), BigReal(0L, bits));
  for (std::size_t k : magnitude_order(nodes)) {
    if (nodes[k].is_zero()) {
      acc = acc * z;
    } else {
      acc = acc * (Complex(BigReal(1L, bits)) - z / nodes[k]);
    }
  }
  return acc;
}

}  // namespace

const char* to_string(ConditionId id) {
  switch (id) {
    case ConditionId::C1_ConvergenceExponent: return "C1_ConvergenceExponent";
    case ConditionId::C2_ProductConvergence: return "C2_ProductConvergence";
    case ConditionId::C3_SignConstancy: return "C3_SignConstancy";
    case ConditionId::C4_MomentEquality: return "C4_MomentEquality";
    case ConditionId::C5_SeriesDivergence: return "C5_SeriesDivergence";
    case ConditionId::C6_WeightedConvergence: return "C6_WeightedConvergence";
    case ConditionId::Interlacing: return "Interlacing";
    case ConditionId::MittagLeffler: return "MittagLeffler";
  }
  return "Unknown";
}

const char* condition_name(ConditionId id) {
  switch (id) {
    case ConditionId::C1_ConvergenceExponent: return "convergence-exponent";
    case ConditionId::C2_ProductConvergence: return "product-convergence";
    case ConditionId::C3_SignConstancy: return "sign-constancy";
    case ConditionId::C4_MomentEquality: return "moment-equalities";
    case ConditionId::C5_SeriesDivergence: return "series-divergence";
    case ConditionId::C6_WeightedConvergence: return "weighted-convergence";
    case ConditionId::Interlacing: return "interlacing";
    case ConditionId::MittagLeffler: return "mittag-leffler";
  }
  return "unknown";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "Pass";
    case Status::Fail: return "Fail";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const std::string* ConditionReport::find(const std::string& key) const {
  for (const auto& [k, v] : evidence) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::pair<BigReal, ConditionReport> convergence_exponent_estimate(const std::vector<BigReal>& nodes,
                                                                  const ValidateOptions& opts) {
  return exponent_impl(nodes, opts);
}

ConditionReport check_product_convergence(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in,
                                          const ValidateOptions&) {
  ConditionReport r;
  r.id = ConditionId::C2_ProductConvergence;
  r.status = Status::Pass;
  const Precision bits = precision_of(lambda_in, mu_in);
  const std::vector<std::pair<std::string, std::vector<BigReal>>> sides = {{"lambda", nonzero(lambda_in)},
                                                                          {"mu", nonzero(mu_in)}};
  for (const auto& [side, nodes] : sides) {
    if (nodes.size() < 4) {
      r.status = Status::Inconclusive;
      r.add(side + ".nodes", std::to_string(nodes.size()));
      continue;
    }
    // Change of the partial product at ±s when the two outermost factors are dropped.
    std::vector<std::size_t> order = magnitude_order(nodes);
    const BigReal s = abs(nodes[order[0]]) / 2L;
    std::vector<BigReal> inner;
    for (std::size_t i = 0; i + 2 < order.size(); ++i) inner.push_back(nodes[order[i]]);
    const ProductFunction full = ProductFunction::from_nodes(nodes);
    const ProductFunction part = ProductFunction::from_nodes(inner);
    BigReal change(0L, bits);
    for (int sg : {1, -1}) {
      const BigReal x = s * static_cast<long>(sg);
      const BigReal f = product_eval(full, x);
      change = max(change, abs(f - product_eval(part, x)) / abs(f));
    }
    r.add(side + ".outer_factor_change", num(change));
    if (change.to_double() > 1e-6) r.status = Status::Inconclusive;
  }
  r.detail = r.status == Status::Pass ? "partial products stable under the outermost factors"
                                      : "partial products not yet settled on the supplied nodes";
  return r;
}

ConditionReport check_sign_constancy(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in) {
  ConditionReport r;
  r.id = ConditionId::C3_SignConstancy;
  const ProductFunction rl = ProductFunction::from_nodes(lambda_in);
  const ProductFunction rm = ProductFunction::from_nodes(mu_in);
  const std::vector<BigReal> a = coupling(rl, rm);
  const std::vector<BigReal> b = coupling(rm, rl);
  r.status = Status::Pass;

  const auto examine = [&](const std::string& side, const std::vector<BigReal>& terms, const std::vector<BigReal>& at,
                           int required) {
    long pos = 0, neg = 0;
    for (const BigReal& t : terms) (t.sign() > 0 ? pos : neg) += 1;
    r.add(side + ".positive", std::to_string(pos));
    r.add(side + ".negative", std::to_string(neg));
    int bad_sign = 0;
    if (required != 0) {
      bad_sign = -required;
    } else if (pos > 0 && neg > 0) {
      bad_sign = pos < neg ? 1 : -1;
    }
    if (bad_sign == 0) return;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (terms[j].sign() == bad_sign || terms[j].is_zero()) {
        if (r.status != Status::Fail) {
          r.add("witness", side + "[" + std::to_string(j) + "]=" + num(at[j]));
          r.add("witness_value", num(terms[j]));
        }
        r.status = Status::Fail;
        break;
      }
    }
  };

  // With 0 among the μ the signs are forced: negative on the λ side, positive on the μ side.
  const bool forced = rm.has_zero_node;
  examine("lambda", a, rl.nodes, forced ? -1 : 0);
  examine("mu", b, rm.nodes, forced ? 1 : 0);
  r.detail = forced ? "signs fixed by the zero in mu" : "each family single-signed";
  if (r.status == Status::Fail) r.detail = "sign change in the coupling products";
  return r;
}

ConditionReport check_moment_equalities(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in,
                                        int m_max, const ValidateOptions& opts) {
  ConditionReport r;
  r.id = ConditionId::C4_MomentEquality;
  r.status = Status::Pass;
  const ProductFunction rl = ProductFunction::from_nodes(lambda_in);
  const ProductFunction rm = ProductFunction::from_nodes(mu_in);
  const Precision bits = std::max(rl.precision(), rm.precision());
  const std::vector<BigReal> a = coupling(rl, rm);
  const std::vector<BigReal> b = coupling(rm, rl);
  const std::vector<std::size_t> oa = magnitude_order(rl.nodes);
  const std::vector<std::size_t> ob = magnitude_order(rm.nodes);

  BigReal worst_dev(0L, bits);
  for (int m = 0; m <= m_max; ++m) {
    CompensatedSum left(bits), right(bits);
    BigReal scale(0L, bits), last(0L, bits);
    for (std::size_t j : oa) {
      const BigReal t = pow(rl.nodes[j], static_cast<long>(m)) / a[j];
      left.add(t);
      scale += abs(t);
      last = abs(t);
    }
    BigReal last_mu(0L, bits);
    for (std::size_t j : ob) {
      const BigReal t = pow(rm.nodes[j], static_cast<long>(m)) / b[j];
      right.add(t);
      scale += abs(t);
      last_mu = abs(t);
    }
    if (scale.is_zero()) continue;
    const BigReal dev = abs(left.value() + right.value()) / scale;
    const BigReal tail = max(last, last_mu) / scale;
    if (!tail.is_finite() || tail.to_double() > 0.5) {
      throw Error(ErrorCode::DivergentTail, "moment series of order " + std::to_string(m) + " is not decaying",
                  condition_name(r.id), m);
    }
    const BigReal tol = BigReal::from_double(opts.moment_tolerance, bits) + tail * 10L;
    const std::string key = "m" + std::to_string(m);
    r.add(key + ".lambda_side", num(left.value()));
    r.add(key + ".mu_side", num(-right.value()));
    r.add(key + ".deviation", num(dev));
    worst_dev = max(worst_dev, dev);
    if (dev > tol && r.status != Status::Fail) {
      r.status = Status::Fail;
      r.add("witness", "m=" + std::to_string(m));
    }
  }
  r.add("max_deviation", num(worst_dev));
  // Both sums are residues of z^m/(R_λ R_μ), so on finite lists they cancel identically up
  // to this order. Agreement below it only checks the arithmetic.
  const long exact_to = static_cast<long>(rl.nodes.size() + rm.nodes.size()) - 2;
  r.add("identity_order", std::to_string(exact_to));
  r.detail = r.status == Status::Pass ? "moments agree" : "moment sums from the two spectra disagree";
  if (r.status == Status::Pass && m_max <= exact_to) r.detail += " (automatic for finite lists at these orders)";
  return r;
}

std::pair<ConditionReport, ConditionReport> check_series_5_and_6(const std::vector<BigReal>& lambda_in,
                                                                 const std::vector<BigReal>& mu_in,
                                                                 const ValidateOptions& opts) {
  ConditionReport c5, c6;
  c5.id = ConditionId::C5_SeriesDivergence;
  c6.id = ConditionId::C6_WeightedConvergence;
  c5.status = c6.status = Status::Pass;
  const ProductFunction rl = ProductFunction::from_nodes(lambda_in);
  const ProductFunction rm = ProductFunction::from_nodes(mu_in);

  const auto side = [&](const std::string& name, const ProductFunction& self, const ProductFunction& other) {
    if (self.nodes.size() < opts.min_trend_nodes) {
      c5.status = worst(c5.status, Status::Inconclusive);
      c6.status = worst(c6.status, Status::Inconclusive);
      c5.add(name + ".nodes", std::to_string(self.nodes.size()));
      c6.add(name + ".nodes", std::to_string(self.nodes.size()));
      return;
    }
    std::vector<BigReal> t5, t6;
    for (std::size_t j : magnitude_order(self.nodes)) {
      const BigReal& x = self.nodes[j];
      const BigReal v = product_eval(other, x) / product_derivative_at_node(self, j);
      t6.push_back(v / (1L + x * x));
      t5.push_back(v);
    }
    const Trend d = trend_of(t5);
    const Trend c = trend_of(t6);
    add_trend(c5, name, d);
    add_trend(c6, name, c);

    // Partial sums of single-signed terms that do not shrink keep growing.
    Status s5 = Status::Inconclusive;
    if (d.single_signed && d.ratio >= 1.0) {
      s5 = Status::Pass;
    } else if (d.single_signed && d.ratio < 0.5 && d.share < 1e-3) {
      s5 = Status::Fail;
      c5.add("witness", name + ".tail_share=" + num(d.share));
    }
    Status s6 = Status::Inconclusive;
    if (c.single_signed && c.ratio < 1.0 && c.share < 1e-2) {
      s6 = Status::Pass;
    } else if (c.single_signed && c.ratio > 1.5) {
      s6 = Status::Fail;
      c6.add("witness", name + ".tail_ratio=" + num(c.ratio));
    }
    c5.status = worst(c5.status, s5);
    c6.status = worst(c6.status, s6);
  };
  side("lambda", rl, rm);
  side("mu", rm, rl);
  c5.detail = "trend of partial sums over the supplied prefix";
  c6.detail = "trend of partial sums over the supplied prefix";
  return {std::move(c5), std::move(c6)};
}

ConditionReport check_interlacing(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in) {
  ConditionReport r;
  r.id = ConditionId::Interlacing;
  r.status = Status::Pass;
  const std::vector<BigReal> lambda = sorted_copy(lambda_in);
  const std::vector<BigReal> mu = sorted_copy(mu_in);
  if (lambda.empty() || mu.empty()) {
    r.status = Status::Inconclusive;
    r.detail = "empty list";
    return r;
  }
  const BigReal lo = max(lambda.front(), mu.front());
  const BigReal hi = min(lambda.back(), mu.back());
  r.add("overlap_lo", num(lo));
  r.add("overlap_hi", num(hi));
  if (hi < lo) {
    r.detail = "ranges do not overlap; passes vacuously";
    return r;
  }
  long checked = 0;
  const auto scan = [&](const std::string& name, const std::vector<BigReal>& self, const std::vector<BigReal>& other) {
    for (std::size_t i = 0; i + 1 < self.size(); ++i) {
      if (self[i] < lo || self[i + 1] > hi) continue;
      ++checked;
      long between = 0;
      for (const BigReal& x : other) {
        if (self[i] < x && x < self[i + 1]) ++between;
      }
      if (between != 1 && r.status != Status::Fail) {
        r.status = Status::Fail;
        r.add("witness", name + " pair (" + num(self[i]) + ", " + num(self[i + 1]) + ") encloses " +
                             std::to_string(between));
      }
    }
  };
  scan("lambda", lambda, mu);
  scan("mu", mu, lambda);
  r.add("pairs_checked", std::to_string(checked));
  r.detail = r.status == Status::Pass ? "strict alternation inside the overlap" : "alternation broken";
  return r;
}

namespace {

struct MLSample {
  BigReal deviation;  // |1/R − Σ| / |1/R|
  BigReal condition;  // Σ|terms| / |1/R|
};

MLSample ml_sample(const std::vector<BigReal>& nodes, const std::vector<BigReal>& derivs, const Complex& zeta) {
  if (nodes.size() != derivs.size()) {
    throw Error(ErrorCode::PreconditionViolated, "nodes and derivative values differ in length");
  }
  const Precision bits = std::max(precision_of(nodes), zeta.precision());
  for (const BigReal& k : nodes) {
    const BigReal gap = abs(zeta - Complex(k));
    if (gap < ldexp(abs(k) + 1L, -bits / 2)) {
      throw Error(ErrorCode::SamplePointTooCloseToNode, "sample point within rounding distance of node " + num(k));
    }
  }
  const Complex one(BigReal(1L, bits), BigReal(0L, bits));
  const Complex lhs = one / product_at(nodes, zeta);
  CompensatedSum re(bits), im(bits);
  BigReal mass(0L, bits);
  for (std::size_t j : magnitude_order(nodes)) {
    const Complex t = one / ((zeta - Complex(nodes[j])) * derivs[j]);
    re.add(t.re);
    im.add(t.im);
    mass += abs(t);
  }
  const Complex rhs(re.value(), im.value());
  const BigReal size = abs(lhs);
  return {abs(lhs - rhs) / size, mass / size};
}

}  // namespace

BigReal mittag_leffler_deviation(const std::vector<BigReal>& nodes, const std::vector<BigReal>& derivs,
                                 const Complex& zeta) {
  return ml_sample(nodes, derivs, zeta).deviation;
}

ConditionReport mittag_leffler_check(const std::vector<BigReal>& nodes_in, const std::vector<BigReal>& derivs_in,
                                     const ValidateOptions& opts) {
  ConditionReport r;
  r.id = ConditionId::MittagLeffler;
  if (nodes_in.size() != derivs_in.size() || nodes_in.empty()) {
    throw Error(ErrorCode::PreconditionViolated, "need matching, nonempty node and derivative lists");
  }
  // Keep each derivative attached to its node while sorting.
  std::vector<std::size_t> idx(nodes_in.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return nodes_in[i] < nodes_in[j]; });
  std::vector<BigReal> nodes, derivs;
  for (std::size_t i : idx) {
    nodes.push_back(nodes_in[i]);
    derivs.push_back(derivs_in[i]);
  }
  const Precision bits = precision_of(nodes);

  std::vector<Complex> samples;
  const BigReal zero(0L, bits);
  for (long s : {1L, 10L}) {
    samples.emplace_back(zero, BigReal(s, bits));
    samples.emplace_back(zero, BigReal(-s, bits));
  }
  // Gap midpoints among the inner half by magnitude, where the supplied prefix of the
  // product is closest to the full function.
  std::vector<std::size_t> order = magnitude_order(nodes);
  const BigReal inner = abs(nodes[order[(order.size() - 1) / 2]]);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (abs(nodes[i]) <= inner && abs(nodes[i + 1]) <= inner) samples.emplace_back((nodes[i] + nodes[i + 1]) / 2L);
  }

  // Between large nodes 1/R is tiny next to the individual terms; a sample only counts when
  // the working precision can resolve the tolerance after that cancellation.
  const BigReal max_condition = BigReal::from_double(opts.mittag_leffler_tolerance, bits) * ldexp(BigReal(1L, bits), bits - 16);
  BigReal worst_dev(0L, bits);
  std::string where;
  long used = 0, skipped = 0;
  for (const Complex& z : samples) {
    const MLSample smp = ml_sample(nodes, derivs, z);
    if (z.re.is_zero() && z.im == 1L) r.add("deviation_at_i", num(smp.deviation));
    if (smp.condition > max_condition) {
      ++skipped;
      continue;
    }
    ++used;
    if (smp.deviation >= worst_dev) {
      worst_dev = smp.deviation;
      where = num(z.re) + (z.im.sign() < 0 ? " - " : " + ") + num(abs(z.im)) + "i";
    }
  }
  r.add("samples", std::to_string(used));
  r.add("skipped_ill_conditioned", std::to_string(skipped));
  r.add("max_deviation", num(worst_dev));
  if (used == 0) {
    r.status = Status::Inconclusive;
    r.detail = "every sample point too ill-conditioned at this precision";
  } else if (worst_dev.to_double() < opts.mittag_leffler_tolerance) {
    r.status = Status::Pass;
    r.detail = "partial-fraction expansion reproduces the reciprocal";
  } else {
    r.status = Status::Fail;
    r.add("witness", "zeta=" + where);
    r.detail = "partial-fraction expansion deviates from the reciprocal";
  }
  return r;
}

ValidationResult validate_all(const std::vector<BigReal>& lambda_in, const std::vector<BigReal>& mu_in,
                              const ValidateOptions& opts) {
  const std::vector<BigReal> lambda = sorted_copy(lambda_in);
  const std::vector<BigReal> mu = sorted_copy(mu_in);
  require_hypotheses(lambda, mu);
  if (lambda.empty() || mu.empty()) throw Error(ErrorCode::TooFewNodes, "both spectra must be nonempty");

  ValidationResult out;

  ConditionReport c1;
  c1.id = ConditionId::C1_ConvergenceExponent;
  c1.status = Status::Pass;
  for (const auto& [side, nodes] : {std::pair{std::string("lambda"), lambda}, std::pair{std::string("mu"), mu}}) {
    try {
      auto [est, rep] = exponent_impl(nodes, opts);
      for (auto& [k, v] : rep.evidence) c1.add(side + "." + k, v);
      c1.status = worst(c1.status, rep.status);
      if (rep.status == Status::Fail && c1.detail.empty()) c1.detail = side + ": " + rep.detail;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewNodes) throw;
      c1.status = worst(c1.status, Status::Inconclusive);
      c1.add(side + ".note", e.what());
    }
  }
  if (const std::string* w = c1.find("lambda.witness")) c1.add("witness", "lambda " + *w);
  else if (const std::string* wm = c1.find("mu.witness")) c1.add("witness", "mu " + *wm);
  if (c1.detail.empty()) c1.detail = "counting-function estimate within bounds";
  out.reports.push_back(std::move(c1));

  out.reports.push_back(check_product_convergence(lambda, mu, opts));

  ConditionReport c3 = check_sign_constancy(lambda, mu);
  const bool signs_ok = c3.status == Status::Pass;
  out.reports.push_back(std::move(c3));

  try {
    ConditionReport c4 = check_moment_equalities(lambda, mu, opts.m_max, opts);
    if (!signs_ok && c4.status == Status::Pass) {
      c4.status = Status::Inconclusive;
      c4.detail = "moments agree but sign constancy failed";
    }
    out.reports.push_back(std::move(c4));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DivergentTail) throw;
    ConditionReport c4;
    c4.id = ConditionId::C4_MomentEquality;
    // A handful of nodes cannot show decay yet; only a longer prefix counts as evidence.
    const bool short_data = std::min(lambda.size(), mu.size()) < opts.min_trend_nodes;
    c4.status = short_data ? Status::Inconclusive : Status::Fail;
    c4.add(short_data ? "order" : "witness", e.index() ? "m=" + std::to_string(*e.index()) : "tail");
    c4.detail = e.what();
    out.reports.push_back(std::move(c4));
  }

  auto [c5, c6] = check_series_5_and_6(lambda, mu, opts);
  out.reports.push_back(std::move(c5));
  out.reports.push_back(std::move(c6));

  out.reports.push_back(check_interlacing(lambda, mu));

  // With only the nodes at hand the derivative values come from the product itself, so
  // this mainly guards against numerical trouble in the products.
  const ProductFunction rl = ProductFunction::from_nodes(lambda);
  std::vector<BigReal> derivs;
  for (std::size_t j = 0; j < rl.nodes.size(); ++j) derivs.push_back(product_derivative_at_node(rl, j));
  ConditionReport ml = mittag_leffler_check(rl.nodes, derivs, opts);
  ml.detail += " (derivatives from the supplied nodes)";
  out.reports.push_back(std::move(ml));

  int inconclusive = 0;
  bool failed = false;
  for (const ConditionReport& r : out.reports) {
    if (r.status == Status::Fail) failed = true;
    if (r.status == Status::Inconclusive) ++inconclusive;
  }
  if (failed) {
    out.overall = Status::Fail;
  } else if (inconclusive > opts.max_inconclusive) {
    out.overall = Status::Inconclusive;
    out.notes.push_back(std::to_string(inconclusive) + " conditions inconclusive");
  } else {
    out.overall = Status::Pass;
  }
  out.notes.push_back("C1, C5 and C6 concern infinite tails; their status is a trend classification");
  return out;
}

}  // namespace jts
