#include "jts/files.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "jts/error.hpp"

namespace jts {

namespace {

long line_of_offset(const std::string& raw, std::size_t offset) {
  offset = std::min(offset, raw.size());
  return 1 + static_cast<long>(std::count(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Where the field shows up in the raw text. Good enough for messages: looks for the
// quoted value after the key.
std::string locate(const std::string& source, const std::string& raw, const std::string& field,
                   const std::string& value) {
  std::string where = source.empty() ? "" : source + ": ";
  if (!raw.empty()) {
    const std::string key = "\"" + field.substr(0, field.find('[')) + "\"";
    std::size_t from = raw.find(key);
    if (from == std::string::npos) from = 0;
    std::size_t at = value.empty() ? from : raw.find("\"" + value + "\"", from);
    if (at == std::string::npos) at = from;
    where += "line " + std::to_string(line_of_offset(raw, at)) + ": ";
  }
  return where + "field " + field;
}

[[noreturn]] void fail(const std::string& source, const std::string& raw, const std::string& field,
                       const std::string& value, const std::string& why) {
  throw Error(ErrorCode::ParseError, locate(source, raw, field, value) + ": " + why, field);
}

const Json& need(const Json& j, const char* key, const std::string& source, const std::string& raw) {
  if (!j.is_object() || !j.contains(key)) fail(source, raw, key, "", "missing");
  return j.at(key);
}

BigReal parse_value(const Json& v, Precision bits, const std::string& field, const std::string& source,
                    const std::string& raw) {
  if (!v.is_string()) fail(source, raw, field, "", "expected a decimal string");
  const std::string text = v.get<std::string>();
  BigReal x;
  try {
    x = BigReal::parse(text, bits);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    fail(source, raw, field, text, "malformed decimal \"" + text + "\"");
  }
  if (!x.is_finite()) fail(source, raw, field, text, "value must be finite");
  return x;
}

Precision file_precision(const Json& j, const std::string& source, const std::string& raw) {
  const Json& p = need(j, "precision_bits", source, raw);
  if (!p.is_number_integer() || p.get<long>() < kMinPrecisionBits) {
    fail(source, raw, "precision_bits", "", "expected an integer >= " + std::to_string(kMinPrecisionBits));
  }
  return p.get<long>();
}

void check_header(const Json& j, const char* kind, const std::string& source, const std::string& raw) {
  const Json& v = need(j, "schema_version", source, raw);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    fail(source, raw, "schema_version", "", "unsupported schema version");
  }
  if (j.contains("kind") && j.at("kind") != kind) {
    fail(source, raw, "kind", "", std::string("expected \"") + kind + "\"");
  }
}

Json parse_document(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                source + ": line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const std::vector<BigReal>& xs) {
  Json out = Json::array();
  for (const BigReal& x : xs) out.push_back(x.to_string());
  return out;
}

std::vector<BigReal> parse_values(const Json& j, Precision bits, const std::string& field, const std::string& source,
                                  const std::string& raw) {
  if (!j.is_array()) fail(source, raw, field, "", "expected an array of decimal strings");
  std::vector<BigReal> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_value(j[i], bits, field + "[" + std::to_string(i) + "]", source, raw));
  }
  return out;
}

JacobiMatrix MatrixFile::matrix(Precision bits) const { return JacobiMatrix(b, q, std::max(bits, precision_bits)); }

MatrixFile MatrixFile::from_matrix(const JacobiMatrix& m, Json metadata) {
  MatrixFile f;
  f.b = m.b_entries();
  f.q = m.q_entries();
  f.precision_bits = m.precision();
  f.metadata = std::move(metadata);
  return f;
}

Json to_json(const MatrixFile& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "matrix";
  j["precision_bits"] = f.precision_bits;
  j["b"] = to_json(f.b);
  j["q"] = to_json(f.q);
  j["metadata"] = f.metadata;
  return j;
}

Json to_json(const SpectrumFile& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "spectrum";
  j["precision_bits"] = f.precision_bits;
  j["tau"] = f.tau ? Json(f.tau->to_string()) : Json(nullptr);
  j["trust_radius"] = f.trust_radius.to_string();
  if (f.window_lo && f.window_hi) j["window"] = {f.window_lo->to_string(), f.window_hi->to_string()};
  j["eigenvalues"] = to_json(f.eigenvalues);
  if (f.normalizing_constants) j["normalizing_constants"] = to_json(*f.normalizing_constants);
  j["metadata"] = f.metadata;
  return j;
}

MatrixFile matrix_from_json(const Json& j, Precision bits, const std::string& source, const std::string& raw) {
  check_header(j, "matrix", source, raw);
  MatrixFile f;
  f.precision_bits = file_precision(j, source, raw);
  const Precision p = std::max(bits, f.precision_bits);
  f.b = parse_values(need(j, "b", source, raw), p, "b", source, raw);
  f.q = parse_values(need(j, "q", source, raw), p, "q", source, raw);
  if (f.b.size() != f.q.size()) fail(source, raw, "q", "", "b and q differ in length");
  if (j.contains("metadata")) f.metadata = j.at("metadata");
  return f;
}

SpectrumFile spectrum_from_json(const Json& j, Precision bits, const std::string& source, const std::string& raw) {
  check_header(j, "spectrum", source, raw);
  SpectrumFile f;
  f.precision_bits = file_precision(j, source, raw);
  const Precision p = std::max(bits, f.precision_bits);
  const Json& tau = need(j, "tau", source, raw);
  if (!tau.is_null()) {
    if (!tau.is_string()) fail(source, raw, "tau", "", "expected \"inf\", a decimal string or null");
    try {
      f.tau = ExtensionParameter::parse(tau.get<std::string>(), p);
    } catch (const Error&) {
      fail(source, raw, "tau", tau.get<std::string>(), "malformed extension parameter");
    }
  }
  // hand-written spectra may leave the radius unrestricted
  const Json& radius = need(j, "trust_radius", source, raw);
  f.trust_radius = radius == "inf" ? BigReal::infinity(1, p) : parse_value(radius, p, "trust_radius", source, raw);
  if (j.contains("window")) {
    const std::vector<BigReal> w = parse_values(j.at("window"), p, "window", source, raw);
    if (w.size() != 2 || w[1] < w[0]) fail(source, raw, "window", "", "expected [lo, hi] with lo <= hi");
    f.window_lo = w[0];
    f.window_hi = w[1];
  }
  f.eigenvalues = parse_values(need(j, "eigenvalues", source, raw), p, "eigenvalues", source, raw);
  for (std::size_t i = 1; i < f.eigenvalues.size(); ++i) {
    if (!(f.eigenvalues[i - 1] < f.eigenvalues[i])) {
      const std::string field = "eigenvalues[" + std::to_string(i) + "]";
      throw Error(ErrorCode::ParseError,
                  locate(source, raw, field, j.at("eigenvalues")[i].get<std::string>()) + ": not strictly increasing",
                  field, static_cast<long>(i));
    }
  }
  if (j.contains("normalizing_constants")) {
    f.normalizing_constants = parse_values(j.at("normalizing_constants"), p, "normalizing_constants", source, raw);
    if (f.normalizing_constants->size() != f.eigenvalues.size()) {
      fail(source, raw, "normalizing_constants", "", "length differs from eigenvalues");
    }
  }
  if (j.contains("metadata")) f.metadata = j.at("metadata");
  return f;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path);
  return text;
}

MatrixFile read_matrix_file(const std::string& path, Precision bits) {
  const std::string raw = read_text(path);
  return matrix_from_json(parse_document(raw, path), bits, path, raw);
}

SpectrumFile read_spectrum_file(const std::string& path, Precision bits) {
  const std::string raw = read_text(path);
  return spectrum_from_json(parse_document(raw, path), bits, path, raw);
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::IoError, "cannot rename " + tmp + " to " + path);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InvariantViolated, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Json make_report(const std::string& command, Precision bits) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "report";
  j["command"] = command;
  j["precision_bits"] = bits;
  j["inputs"] = Json::object();
  return j;
}

void add_input(Json& report, const std::string& role, const std::string& path, const std::string& contents) {
  report["inputs"][role] = {{"path", path}, {"sha256", sha256_hex(contents)}};
}

}  // namespace jts
