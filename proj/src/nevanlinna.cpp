#include "jts/nevanlinna.hpp"

#include <algorithm>
#include <cmath>

#include "jts/error.hpp"

namespace jts {

Nevanlinna::Nevanlinna(JacobiMatrix m, NevanlinnaOptions opts)
  : m_(std::move(m)), opts_(opts), p0_(eval_first_kind(m_, BigReal(0L, m_.precision()))),
    q0_(eval_second_kind(m_, BigReal(0L, m_.precision()))) {}

BigReal Nevanlinna::cross_check_tolerance() const {
  if (opts_.cross_check_tolerance > 0) return BigReal::from_double(opts_.cross_check_tolerance, m_.precision());
  return tenth_power(m_.precision() / 8, m_.precision());
}

std::pair<BigReal, BigReal> Nevanlinna::DB(const BigReal& x) const {
  const RealTable p = eval_first_kind(m_, x);
  const std::size_t n = m_.size();
  return {wronskian_at(m_, p0_, p, n), wronskian_at(m_, q0_, p, n)};
}

NevanlinnaValue Nevanlinna::evaluate(const BigReal& x_in) const {
  const Precision bits = m_.precision();
  const BigReal x = x_in.precision() >= bits ? x_in : x_in.with_precision(bits);
  const std::size_t n = m_.size();
  const RealTable p = eval_first_kind(m_, x);
  const RealTable dp = eval_first_kind_derivative(m_, x);

  NevanlinnaValue v;
  v.at = x;
  v.index_used = n;
  v.D = wronskian_at(m_, p0_, p, n);
  v.B = wronskian_at(m_, q0_, p, n);
  v.D_prime = wronskian_at(m_, p0_, dp, n);
  v.B_prime = wronskian_at(m_, q0_, dp, n);

  const BigReal dD = abs(v.D - wronskian_at(m_, p0_, p, n - 1));
  const BigReal dB = abs(v.B - wronskian_at(m_, q0_, p, n - 1));
  const BigReal mag = abs(v.D) + abs(v.B);
  v.tail_certificate = mag.is_zero() ? BigReal(0L, bits) : max(dD, dB) / mag;

  // Green-series forms: D = x Σ P_k(0)P_k(x), B = −1 + x Σ Q_k(0)P_k(x).
  CompensatedSum sd(bits), sb(bits);
  BigReal scale_d(0L, bits), scale_b(0L, bits);
  for (std::size_t k = 0; k < n; ++k) {
    const BigReal td = p0_.values[k] * p.values[k];
    const BigReal tb = q0_.values[k] * p.values[k];
    sd.add(td);
    sb.add(tb);
    scale_d += abs(td);
    scale_b += abs(tb);
  }
  const BigReal ax = abs(x);
  const BigReal d_series = x * sd.value();
  const BigReal b_series = x * sb.value() - 1L;
  scale_d *= ax;
  scale_b = scale_b * ax + 1L;
  BigReal dev_d = abs(v.D - d_series);
  if (!scale_d.is_zero()) dev_d /= scale_d;
  const BigReal dev_b = abs(v.B - b_series) / scale_b;
  v.cross_check = max(dev_d, dev_b);
  return v;
}

NevanlinnaValue Nevanlinna::eval_DB(const BigReal& x) const {
  NevanlinnaValue v = evaluate(x);
  if (v.cross_check > cross_check_tolerance()) {
    throw Error(ErrorCode::CrossCheckFailed,
                "Wronskian and series forms of D, B disagree by " + v.cross_check.to_string(6) + " at x = " +
                    v.at.to_string(12));
  }
  if (v.tail_certificate.to_double() > opts_.tail_threshold) {
    throw Error(ErrorCode::TailNotConverged,
                "last-step increment ratio " + v.tail_certificate.to_string(6) + " at x = " + v.at.to_string(12));
  }
  return v;
}

BigReal Nevanlinna::eval_R(const ExtensionParameter& tau, const BigReal& x) const {
  auto [d, b] = DB(x);
  if (tau.is_infinite()) return b;
  return d + tau.value() * b;
}

BigReal Nevanlinna::eval_R_prime(const ExtensionParameter& tau, const BigReal& x) const {
  const RealTable dp = eval_first_kind_derivative(m_, x);
  const std::size_t n = m_.size();
  const BigReal bp = wronskian_at(m_, q0_, dp, n);
  if (tau.is_infinite()) return bp;
  return wronskian_at(m_, p0_, dp, n) + tau.value() * bp;
}

std::vector<BigReal> Nevanlinna::boundary_sequence(const ExtensionParameter& tau) const {
  if (tau.is_infinite()) return q0_.values;
  std::vector<BigReal> v;
  v.reserve(p0_.values.size());
  for (std::size_t k = 0; k < p0_.values.size(); ++k) v.push_back(p0_.values[k] + tau.value() * q0_.values[k]);
  return v;
}

NevanlinnaValue eval_DB(const JacobiMatrix& m, const BigReal& x) { return Nevanlinna(m).eval_DB(x); }

BigReal eval_R(const JacobiMatrix& m, const ExtensionParameter& tau, const BigReal& x) {
  return Nevanlinna(m).eval_R(tau, x);
}

namespace {

double decay_ratio(const JacobiMatrix& m, const BigReal& x) {
  const RealTable p = eval_first_kind(m, x);
  const std::size_t n = m.size();
  const auto t = [&](std::size_t k) { return p.values[k] * p.values[k]; };
  const BigReal num = t(n - 1) + t(n - 2);
  const BigReal den = t(n - 3) + t(n - 4);
  if (den.is_zero()) return num.is_zero() ? 0.0 : HUGE_VAL;
  return (num / den).to_double();
}

// Finite section whose eigenvalues are the zeros of ℛ_τ at truncation N:
// ℛ_τ = b_N (v_N P_N − v_{N+1} P_{N−1}), which is a multiple of the characteristic
// polynomial with q_N replaced by q_N + b_N v_{N+1}/v_N. When v_N = 0 the zeros are
// those of P_{N−1}, i.e. the leading (N−1) block.
struct SturmSection {
  std::vector<BigReal> diag;
  std::vector<BigReal> off_sq;  // off_sq[i] = b_{i+1}^2

  SturmSection(const Nevanlinna& nev, const ExtensionParameter& tau) {
    const JacobiMatrix& m = nev.matrix();
    const std::size_t n = m.size();
    const std::vector<BigReal> v = nev.boundary_sequence(tau);
    const bool reduced = v[n - 1].is_zero();
    const std::size_t size = reduced ? n - 1 : n;
    for (std::size_t k = 1; k <= size; ++k) diag.push_back(m.q(k));
    if (!reduced) diag.back() += m.b(n) * v[n] / v[n - 1];
    for (std::size_t k = 1; k < size; ++k) off_sq.push_back(m.b(k) * m.b(k));
  }

  long count_below(const BigReal& x) const {
    long neg = 0;
    BigReal d = diag[0] - x;
    const BigReal tiny = epsilon(x.precision()) * (abs(x) + 1L);
    for (std::size_t i = 0;; ++i) {
      if (d.is_zero()) d = -tiny;
      if (d.sign() < 0) ++neg;
      if (i + 1 == diag.size()) break;
      d = diag[i + 1] - x - off_sq[i] / d;
    }
    return neg;
  }
};

class RootFinder {
public:
  RootFinder(const Nevanlinna& nev, const ExtensionParameter& tau, int grid_hint)
    : nev_(nev), tau_(tau), section_(nev, tau), grid_hint_(std::max(grid_hint, 2)),
      bits_(nev.matrix().precision()) {}

  // Zeros in (a, b); neither endpoint may be a zero.
  void run(const BigReal& a, const BigReal& b, std::vector<BigReal>& out) {
    const BigReal ua = asinh(a);
    const BigReal ub = asinh(b);
    const long cells = std::max(2L, static_cast<long>(std::ceil((ub - ua).to_double() * grid_hint_)));
    std::vector<Sample> grid;
    grid.reserve(static_cast<std::size_t>(cells) + 1);
    grid.push_back(sample(a));
    for (long i = 1; i < cells; ++i) grid.push_back(sample(sinh(ua + (ub - ua) * i / cells)));
    grid.push_back(sample(b));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) isolate(grid[i], grid[i + 1], 0, out);
  }

  long count_below(const BigReal& x) const { return section_.count_below(x); }

private:
  struct Sample {
    BigReal x;
    BigReal f;
    long below = 0;
  };

  static constexpr int kMaxDepth = 80;

  Sample sample(const BigReal& x) const { return {x, nev_.eval_R(tau_, x), section_.count_below(x)}; }

  void isolate(const Sample& lo, const Sample& hi, int depth, std::vector<BigReal>& out) {
    const long expected = hi.below - lo.below;
    const bool change = lo.f.sign() * hi.f.sign() < 0;
    if (expected == 0 && !change) return;
    if (expected == 1 && change) {
      out.push_back(polish(lo, hi));
      return;
    }
    if (depth >= kMaxDepth) {
      throw Error(ErrorCode::BracketingIncomplete,
                  "could not isolate zeros between " + lo.x.to_string(12) + " and " + hi.x.to_string(12) + " (" +
                      std::to_string(expected) + " expected)");
    }
    const BigReal mid_u = (asinh(lo.x) + asinh(hi.x)) / 2L;
    const Sample mid = sample(sinh(mid_u));
    if (mid.f.is_zero()) {
      // An exact zero on the grid; split around it.
      const BigReal eta = ldexp(abs(mid.x) + 1L, -bits_ / 2);
      out.push_back(mid.x);
      isolate(lo, sample(mid.x - eta), depth + 1, out);
      isolate(sample(mid.x + eta), hi, depth + 1, out);
      return;
    }
    isolate(lo, mid, depth + 1, out);
    isolate(mid, hi, depth + 1, out);
  }

  BigReal polish(Sample lo, Sample hi) const {
    const BigReal rel = epsilon(bits_ - 10);
    while (hi.x - lo.x > rel * max(abs(lo.x), abs(hi.x))) {
      BigReal mid = (lo.x + hi.x) / 2L;
      BigReal fm = nev_.eval_R(tau_, mid);
      if (fm.is_zero()) return mid;
      if (fm.sign() == lo.f.sign()) {
        lo.x = std::move(mid);
        lo.f = std::move(fm);
      } else {
        hi.x = std::move(mid);
        hi.f = std::move(fm);
      }
    }
    // One secant step inside the final bracket; keep whichever point is closest to zero.
    const BigReal denom = hi.f - lo.f;
    BigReal best = abs(lo.f) <= abs(hi.f) ? lo.x : hi.x;
    BigReal best_f = min(abs(lo.f), abs(hi.f));
    if (!denom.is_zero()) {
      const BigReal s = hi.x - hi.f * (hi.x - lo.x) / denom;
      if (s >= lo.x && s <= hi.x) {
        const BigReal fs = abs(nev_.eval_R(tau_, s));
        if (fs <= best_f) best = s;
      }
    }
    return best;
  }

  const Nevanlinna& nev_;
  ExtensionParameter tau_;
  SturmSection section_;
  int grid_hint_;
  Precision bits_;
};

}  // namespace

TrustReport trust_radius(const Nevanlinna& nev) {
  const JacobiMatrix& m = nev.matrix();
  const Precision bits = m.precision();
  const std::size_t n = m.size();
  const Nevanlinna half(m.leading(std::max<std::size_t>(n / 2, 4)), nev.options());

  BigReal cap(0L, bits);
  for (std::size_t k = 1; k <= n; ++k) {
    BigReal g = abs(m.q(k)) + m.b(k);
    if (k > 1) g += m.b(k - 1);
    cap = max(cap, g);
  }
  cap = cap * 2L;

  TrustReport report;
  report.radius = BigReal(0L, bits);
  const BigReal step = pow(BigReal(2L, bits), BigReal::parse("0.25", bits));
  const BigReal tol = nev.cross_check_tolerance();
  for (BigReal x(1L, bits); x <= cap; x *= step) {
    TrustProbe probe;
    probe.x = x;
    probe.ok = true;
    for (int s : {1, -1}) {
      const BigReal xs = x * static_cast<long>(s);
      const NevanlinnaValue full = nev.evaluate(xs);
      const NevanlinnaValue part = half.evaluate(xs);
      const BigReal worst = max(full.cross_check, part.cross_check);
      const BigReal drift = (abs(full.D - part.D) + abs(full.B - part.B)) / (abs(full.D) + abs(full.B));
      probe.half_drift = std::max(probe.half_drift, drift.to_double());
      probe.cross_check = std::max(probe.cross_check, worst.to_double());
      probe.tail_certificate = std::max(probe.tail_certificate, full.tail_certificate.to_double());
      const double rho = decay_ratio(m, xs);
      probe.decay_ratio = std::max(probe.decay_ratio, rho);
      if (!(rho < 1.0) || worst > tol || full.tail_certificate.to_double() > nev.options().tail_threshold) {
        probe.ok = false;
      }
    }
    report.probes.push_back(probe);
    if (!probe.ok) break;
    report.radius = x;
  }
  return report;
}

long count_zeros_below(const Nevanlinna& nev, const ExtensionParameter& tau, const BigReal& x) {
  return SturmSection(nev, tau).count_below(x);
}

Spectrum find_spectrum(const Nevanlinna& nev, const ExtensionParameter& tau, const BigReal& lo_in,
                       const BigReal& hi_in, int grid_hint) {
  const Precision bits = nev.matrix().precision();
  const BigReal lo = lo_in.with_precision(bits);
  const BigReal hi = hi_in.with_precision(bits);
  if (!lo.is_finite() || !hi.is_finite() || !(lo < hi)) {
    throw Error(ErrorCode::PreconditionViolated, "window must be finite with lo < hi");
  }
  const BigReal radius = trust_radius(nev).radius;
  if (max(abs(lo), abs(hi)) > radius) {
    throw Error(ErrorCode::WindowUntrusted, "window [" + lo.to_string(8) + ", " + hi.to_string(8) +
                                                "] exceeds the trust radius " + radius.to_string(8));
  }

  RootFinder finder(nev, tau, grid_hint);
  std::vector<BigReal> roots;
  const BigReal zero(0L, bits);
  if (tau.is_zero() && lo <= zero && zero <= hi) {
    // ℛ_0(0) = D(0) = 0 exactly; isolate it with a tiny gap and insert it as is.
    const BigReal eta = epsilon(bits / 2);
    if (finder.count_below(eta) - finder.count_below(-eta) != 1) {
      throw Error(ErrorCode::InvariantViolated, "zero eigenvalue of the τ = 0 extension is not isolated");
    }
    if (lo < -eta) finder.run(lo, -eta, roots);
    roots.push_back(zero);
    if (eta < hi) finder.run(eta, hi, roots);
  } else {
    finder.run(lo, hi, roots);
  }

  std::sort(roots.begin(), roots.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (!(roots[i - 1] < roots[i])) {
      throw Error(ErrorCode::InvariantViolated, "duplicate eigenvalue " + roots[i].to_string(12));
    }
  }

  Spectrum s;
  s.tau = tau;
  s.eigenvalues = std::move(roots);
  s.trust_radius = radius;
  s.window_lo = lo;
  s.window_hi = hi;
  return s;
}

Spectrum find_spectrum(const JacobiMatrix& m, const ExtensionParameter& tau, const BigReal& lo, const BigReal& hi,
                       int grid_hint) {
  return find_spectrum(Nevanlinna(m), tau, lo, hi, grid_hint);
}

Spectrum find_spectrum_trusted(const Nevanlinna& nev, const ExtensionParameter& tau, int grid_hint) {
  const BigReal r = trust_radius(nev).radius;
  return find_spectrum(nev, tau, -r, r, grid_hint);
}

Spectrum normalizing_constants(const JacobiMatrix& m, Spectrum spectrum) {
  std::vector<BigReal> a;
  a.reserve(spectrum.eigenvalues.size());
  // The truncated sums undershoot a(λ), so Σ 1/a may exceed one by roughly the dropped tails.
  BigReal slack = epsilon(m.precision() / 2);
  for (const BigReal& lambda : spectrum.eigenvalues) {
    NormSquared ns = norm_squared_P(m, lambda);
    if (ns.value.sign() <= 0) {
      throw Error(ErrorCode::InvariantViolated, "non-positive normalizing constant at " + lambda.to_string(12));
    }
    slack += ns.tail_ratio * 4L / ns.value;
    a.push_back(std::move(ns.value));
  }
  spectrum.normalizing_constants = std::move(a);
  const BigReal mass = spectral_mass(spectrum);
  if (mass - 1L > slack) {
    throw Error(ErrorCode::InvariantViolated,
                "spectral mass exceeds one by " + (mass - 1L).to_string(6) + ", beyond the truncation allowance " +
                    slack.to_string(6));
  }
  return spectrum;
}

BigReal spectral_mass(const Spectrum& s) {
  const Precision bits = s.trust_radius.precision();
  if (!s.normalizing_constants) return BigReal(0L, bits);
  // Ascending |λ| keeps the sum independent of the listing order.
  std::vector<std::size_t> order(s.eigenvalues.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const BigReal ai = abs(s.eigenvalues[i]);
    const BigReal aj = abs(s.eigenvalues[j]);
    return ai < aj || (ai == aj && s.eigenvalues[i] < s.eigenvalues[j]);
  });
  CompensatedSum sum(bits);
  for (std::size_t i : order) sum.add(1L / (*s.normalizing_constants)[i]);
  return sum.value();
}

}  // namespace jts
