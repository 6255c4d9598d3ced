#pragma once

#include <map>
#include <string>
#include <vector>

#include "jts/nevanlinna.hpp"

namespace fx {

inline constexpr jts::Precision kBits = 256;

inline jts::BigReal num(const char* s) { return jts::BigReal::parse(s, kBits); }
inline jts::BigReal num(long v) { return jts::BigReal(v, kBits); }

// b_n = 2^n, q_n = 0, written out without the family generator.
inline jts::JacobiMatrix geometric(std::size_t n = 40, long c = 2) {
  std::vector<jts::BigReal> b, q;
  jts::BigReal bn(1L, kBits);
  for (std::size_t i = 0; i < n; ++i) {
    bn = bn * c;
    b.push_back(bn);
    q.emplace_back(0L, kBits);
  }
  return jts::JacobiMatrix(b, q, kBits);
}

inline const jts::Nevanlinna& nev2() {
  static const jts::Nevanlinna n(geometric());
  return n;
}

// Trusted-window spectrum of the c = 2 matrix, computed once per tau.
inline const jts::Spectrum& spectrum2(const std::string& tau) {
  static std::map<std::string, jts::Spectrum> cache;
  auto it = cache.find(tau);
  if (it == cache.end()) {
    jts::Spectrum s = jts::find_spectrum_trusted(nev2(), jts::ExtensionParameter::parse(tau, kBits));
    it = cache.emplace(tau, jts::normalizing_constants(nev2().matrix(), std::move(s))).first;
  }
  return it->second;
}

inline double rel(const jts::BigReal& got, const jts::BigReal& want) {
  return (jts::abs(got - want) / jts::abs(want)).to_double();
}

}  // namespace fx
