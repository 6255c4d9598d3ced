#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jts/core.hpp"

namespace jts {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct MatrixFile {
  std::vector<BigReal> b;
  std::vector<BigReal> q;
  Precision precision_bits = kDefaultPrecisionBits;
  Json metadata = Json::object();

  JacobiMatrix matrix(Precision bits) const;
  static MatrixFile from_matrix(const JacobiMatrix& m, Json metadata = Json::object());
};

struct SpectrumFile {
  std::optional<ExtensionParameter> tau;  // nullopt: unknown
  std::vector<BigReal> eigenvalues;       // strictly increasing
  BigReal trust_radius;
  std::optional<BigReal> window_lo;
  std::optional<BigReal> window_hi;
  std::optional<std::vector<BigReal>> normalizing_constants;
  Precision precision_bits = kDefaultPrecisionBits;
  Json metadata = Json::object();
};

// Values are parsed at max(file precision, bits). `source` names the document in error
// messages, which carry the line of the offending field when the raw text is supplied.
Json to_json(const MatrixFile& f);
Json to_json(const SpectrumFile& f);
MatrixFile matrix_from_json(const Json& j, Precision bits, const std::string& source = "matrix",
                            const std::string& raw = {});
SpectrumFile spectrum_from_json(const Json& j, Precision bits, const std::string& source = "spectrum",
                                const std::string& raw = {});

MatrixFile read_matrix_file(const std::string& path, Precision bits);
SpectrumFile read_spectrum_file(const std::string& path, Precision bits);

std::string read_text(const std::string& path);
// Writes next to the target and renames over it.
void write_atomic(const std::string& path, const std::string& text);
// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

std::string sha256_hex(const std::string& bytes);

// {"schema_version", "kind": "report", "command", "inputs"} skeleton.
Json make_report(const std::string& command, Precision bits);
void add_input(Json& report, const std::string& role, const std::string& path, const std::string& contents);

Json to_json(const std::vector<BigReal>& xs);
std::vector<BigReal> parse_values(const Json& j, Precision bits, const std::string& field,
                                  const std::string& source = {}, const std::string& raw = {});

}  // namespace jts
