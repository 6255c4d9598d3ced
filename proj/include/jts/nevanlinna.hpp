#pragma once

#include <optional>
#include <vector>

#include "jts/core.hpp"

namespace jts {

struct NevanlinnaValue {
  BigReal D;
  BigReal B;
  BigReal D_prime;
  BigReal B_prime;
  BigReal at;
  std::size_t index_used = 0;
  // max(|D_N − D_{N−1}|, |B_N − B_{N−1}|) / (|D| + |B|)
  BigReal tail_certificate;
  // |Wronskian − Green series| over the magnitude of the series terms
  BigReal cross_check;
};

struct NevanlinnaOptions {
  // Upper bound on tail_certificate; the default only rejects points where the last
  // recurrence step still dominates the value.
  double tail_threshold = 0.5;
  // Relative agreement demanded between the Wronskian and series forms. Zero means
  // 10^(-p/8) for p the matrix precision in decimal digits' worth of bits.
  double cross_check_tolerance = 0;
};

// D, B and ℛ_τ of one matrix with the boundary tables at 0 cached.
class Nevanlinna {
public:
  explicit Nevanlinna(JacobiMatrix m, NevanlinnaOptions opts = {});

  const JacobiMatrix& matrix() const { return m_; }
  const NevanlinnaOptions& options() const { return opts_; }
  BigReal cross_check_tolerance() const;

  // Full evaluation with derivatives, certificate and series cross-check. Throws
  // TailNotConverged or CrossCheckFailed.
  NevanlinnaValue eval_DB(const BigReal& x) const;
  // Same quantities without the threshold checks.
  NevanlinnaValue evaluate(const BigReal& x) const;
  // Unchecked fast path for root finding: only D and B at x.
  std::pair<BigReal, BigReal> DB(const BigReal& x) const;

  BigReal eval_R(const ExtensionParameter& tau, const BigReal& x) const;
  BigReal eval_R_prime(const ExtensionParameter& tau, const BigReal& x) const;

  // Boundary sequence v(τ) = P(0) + τQ(0), or Q(0) for τ = ∞.
  std::vector<BigReal> boundary_sequence(const ExtensionParameter& tau) const;

private:
  JacobiMatrix m_;
  NevanlinnaOptions opts_;
  RealTable p0_;
  RealTable q0_;
};

NevanlinnaValue eval_DB(const JacobiMatrix& m, const BigReal& x);
BigReal eval_R(const JacobiMatrix& m, const ExtensionParameter& tau, const BigReal& x);

struct TrustProbe {
  BigReal x;
  double decay_ratio = 0;   // (t_{N-1}+t_{N-2})/(t_{N-3}+t_{N-4}) with t_k = P_k(x)^2
  double cross_check = 0;   // worst of the two truncation levels
  double tail_certificate = 0;
  double half_drift = 0;    // |(D, B) at N/2 − at N| relative; informational
  bool ok = false;
};

struct TrustReport {
  BigReal radius;
  std::vector<TrustProbe> probes;
};

// Largest |x| on a geometric ladder, capped by a Gershgorin bound, such that at every
// ladder point up to it (both signs) the Wronskian/series cross-check holds at the N/2
// and N truncations, the tail certificate is under threshold and the squared first-kind
// terms are still decaying at index N.
TrustReport trust_radius(const Nevanlinna& nev);

struct Spectrum {
  ExtensionParameter tau = ExtensionParameter::infinity();
  std::vector<BigReal> eigenvalues;
  BigReal trust_radius;
  BigReal window_lo;
  BigReal window_hi;
  std::optional<std::vector<BigReal>> normalizing_constants;
};

inline constexpr int kDefaultGridHint = 64;

// Zeros of ℛ_τ in [lo, hi]. Throws WindowUntrusted or BracketingIncomplete.
Spectrum find_spectrum(const Nevanlinna& nev, const ExtensionParameter& tau, const BigReal& lo, const BigReal& hi,
                       int grid_hint = kDefaultGridHint);
Spectrum find_spectrum(const JacobiMatrix& m, const ExtensionParameter& tau, const BigReal& lo, const BigReal& hi,
                       int grid_hint = kDefaultGridHint);

// Symmetric window at the trust radius.
Spectrum find_spectrum_trusted(const Nevanlinna& nev, const ExtensionParameter& tau, int grid_hint = kDefaultGridHint);

// Number of zeros of ℛ_τ strictly below x, by a Sturm count on the equivalent finite
// section. Used to certify bracketing.
long count_zeros_below(const Nevanlinna& nev, const ExtensionParameter& tau, const BigReal& x);

// Fills a(λ_k) = Σ P_k(λ)^2. Throws TailNotConverged, or InvariantViolated when
// Σ 1/a exceeds one by more than rounding plus the truncation allowance of each a(λ).
Spectrum normalizing_constants(const JacobiMatrix& m, Spectrum spectrum);

// Σ 1/a(λ_k) of a spectrum with constants filled.
BigReal spectral_mass(const Spectrum& s);

}  // namespace jts
