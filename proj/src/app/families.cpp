#include "jts/families.hpp"

#include "jts/error.hpp"

namespace jts {

Family parse_family(const std::string& name) {
  if (name == "geometric") return Family::Geometric;
  if (name == "geometric_shifted") return Family::GeometricShifted;
  if (name == "custom") return Family::Custom;
  throw Error(ErrorCode::ParseError, "unknown family \"" + name + "\"", "family");
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Geometric: return "geometric";
    case Family::GeometricShifted: return "geometric_shifted";
    case Family::Custom: return "custom";
  }
  return "custom";
}

JacobiMatrix generate(const FamilyParams& params, std::size_t length, Precision bits) {
  std::vector<BigReal> b, q;
  if (params.family == Family::Custom) {
    if (params.b.empty()) throw Error(ErrorCode::PreconditionViolated, "custom family needs b values", "b");
    if (!params.q.empty() && params.q.size() != params.b.size()) {
      throw Error(ErrorCode::PreconditionViolated, "custom b and q differ in length", "q");
    }
    for (const std::string& s : params.b) b.push_back(BigReal::parse(s, bits));
    for (std::size_t i = 0; i < params.b.size(); ++i) {
      q.push_back(params.q.empty() ? BigReal(0L, bits) : BigReal::parse(params.q[i], bits));
    }
    return JacobiMatrix(std::move(b), std::move(q), bits);
  }

  const BigReal c = BigReal::parse(params.ratio, bits);
  if (!(c > 0L)) throw Error(ErrorCode::PreconditionViolated, "ratio must be positive", "ratio");
  const BigReal s = BigReal::parse(params.shift, bits);
  BigReal bn(1L, bits);
  for (std::size_t n = 1; n <= length; ++n) {
    bn *= c;
    b.push_back(bn);
    if (params.family == Family::GeometricShifted) {
      q.push_back(n % 2 == 0 ? s : -s);
    } else {
      q.emplace_back(0L, bits);
    }
  }
  return JacobiMatrix(std::move(b), std::move(q), bits);
}

Json family_metadata(const FamilyParams& params, std::size_t length) {
  Json j;
  j["family"] = to_string(params.family);
  if (params.family == Family::Custom) {
    j["length"] = params.b.size();
    return j;
  }
  j["ratio"] = params.ratio;
  if (params.family == Family::GeometricShifted) j["shift"] = params.shift;
  j["length"] = length;
  return j;
}

}  // namespace jts
