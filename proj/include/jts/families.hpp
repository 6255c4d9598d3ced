#pragma once

#include <string>
#include <vector>

#include "jts/core.hpp"
#include "jts/files.hpp"

namespace jts {

enum class Family { Geometric, GeometricShifted, Custom };

Family parse_family(const std::string& name);
const char* to_string(Family f);

struct FamilyParams {
  Family family = Family::Geometric;
  std::string ratio = "2";  // c in b_n = c^n
  std::string shift = "1";  // s in q_n = s(−1)^n, geometric_shifted only
  std::vector<std::string> b;  // custom only
  std::vector<std::string> q;  // custom only; empty means zeros
};

// Builds the first `length` entries. Custom families take their length from the lists.
JacobiMatrix generate(const FamilyParams& params, std::size_t length, Precision bits);

Json family_metadata(const FamilyParams& params, std::size_t length);

}  // namespace jts
