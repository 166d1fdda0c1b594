#include "krein/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include <openssl/evp.h>

#include "krein/errors.hpp"

namespace krein {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) bad("Matrix Market: empty input");
  std::istringstream head(line);
  std::string banner, object, format, field, symmetry;
  head >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    bad("Matrix Market: missing '%%MatrixMarket matrix' banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") bad("Matrix Market: unknown format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer" && field != "double")
    bad("Matrix Market: unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" &&
      symmetry != "skew-symmetric")
    bad("Matrix Market: unsupported symmetry '" + symmetry + "'");
  const bool complex = field == "complex";

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      const auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '%') continue;
      return true;
    }
    return false;
  };
  if (!next_data_line(line)) bad("Matrix Market: missing size line");
  std::istringstream size(line);
  long rows = 0, cols = 0, nnz = 0;
  size >> rows >> cols;
  if (format == "coordinate") size >> nnz;
  if (!size || rows <= 0 || cols <= 0 || nnz < 0) bad("Matrix Market: malformed size line");
  if (symmetry != "general" && rows != cols) bad("Matrix Market: symmetric storage needs a square matrix");

  Matrix m = Matrix::Zero(rows, cols);
  auto place = [&](long i, long j, Complex v) {
    m(i, j) = v;
    if (i == j) return;
    if (symmetry == "symmetric") m(j, i) = v;
    if (symmetry == "hermitian") m(j, i) = std::conj(v);
    if (symmetry == "skew-symmetric") m(j, i) = -v;
  };
  auto read_value = [&](std::istringstream& s) {
    double re = 0.0, im = 0.0;
    s >> re;
    if (complex) s >> im;
    if (!s) bad("Matrix Market: malformed entry '" + line + "'");
    return Complex(re, im);
  };

  if (format == "coordinate") {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(line)) bad("Matrix Market: fewer entries than declared");
      std::istringstream s(line);
      long i = 0, j = 0;
      s >> i >> j;
      if (!s || i < 1 || j < 1 || i > rows || j > cols) bad("Matrix Market: entry index out of range");
      place(i - 1, j - 1, read_value(s));
    }
  } else {
    for (long j = 0; j < cols; ++j)
      for (long i = symmetry == "general" ? 0 : j; i < rows; ++i) {
        if (symmetry == "skew-symmetric" && i == j) continue;
        if (!next_data_line(line)) bad("Matrix Market: fewer entries than declared");
        std::istringstream s(line);
        place(i, j, read_value(s));
      }
  }
  return m;
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path.string() + "'");
  try {
    return read_matrix_market(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  long nnz = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0)) ++nnz;
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << m.rows() << " " << m.cols() << " " << nnz << "\n";
  char buf[128];
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0)) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", static_cast<long>(i + 1),
                      static_cast<long>(j + 1), m(i, j).real(), m(i, j).imag());
        out << buf;
      }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) bad("cannot write '" + path.string() + "'");
  write_matrix_market(out, m);
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::InvalidInput, "SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path.string() + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(data);
}

Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad("manifest must be a JSON object");
  static const std::vector<std::string> known = {"J", "signature", "A", "V", "tolerances", "output", "region"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) bad("manifest: unknown key '" + key + "'");
  Manifest m;
  auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_string()) bad(std::string("manifest: '") + key + "' must be a path string");
    std::filesystem::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  m.j_path = path_of("J");
  m.a_path = path_of("A");
  m.v_path = path_of("V");
  m.output = path_of("output");
  if (j.contains("signature")) {
    const auto& s = j["signature"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      bad("manifest: 'signature' must be [p, q]");
    m.signature = std::pair{s[0].get<int>(), s[1].get<int>()};
  }
  if (m.j_path && m.signature) bad("manifest: give either 'J' or 'signature', not both");
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) bad("manifest: 'tolerances' must be an object");
    m.tolerances = j["tolerances"];
  }
  if (j.contains("region")) m.region = region_from_json(j["region"]);
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  Manifest m = manifest_from_json(j, path.parent_path());
  m.source = path;
  return m;
}

nlohmann::json manifest_to_json(const Manifest& m) {
  nlohmann::json j = nlohmann::json::object();
  if (m.j_path) j["J"] = m.j_path->generic_string();
  if (m.signature) j["signature"] = {m.signature->first, m.signature->second};
  if (m.a_path) j["A"] = m.a_path->generic_string();
  if (m.v_path) j["V"] = m.v_path->generic_string();
  if (!m.tolerances.empty()) j["tolerances"] = m.tolerances;
  if (m.output) j["output"] = m.output->generic_string();
  if (m.region) j["region"] = region_to_json(*m.region);
  return j;
}

Tolerances apply_tolerance_overrides(Tolerances t, const nlohmann::json& overrides) {
  if (overrides.is_null()) return t;
  if (!overrides.is_object()) bad("tolerance overrides must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (!value.is_number()) bad("tolerance '" + key + "' must be a number");
    const double x = value.get<double>();
    if (!(x > 0.0)) bad("tolerance '" + key + "' must be positive");
    if (key == "structure") t.structure = x;
    else if (key == "cluster") t.cluster = x;
    else if (key == "sign") t.sign = x;
    else if (key == "projection") t.projection = x;
    else if (key == "tau") t.tau = x;
    else if (key == "margin") t.margin = x;
    else if (key == "rank") t.rank = x;
    else if (key == "quadrature_points" || key == "quadrature_max_points") {
      if (!value.is_number_integer()) bad("tolerance '" + key + "' must be an integer");
      (key == "quadrature_points" ? t.quadrature_points : t.quadrature_max_points) = value.get<int>();
    } else {
      bad("unknown tolerance '" + key + "'");
    }
  }
  if (t.quadrature_points > t.quadrature_max_points) bad("quadrature_points exceeds quadrature_max_points");
  return t;
}

nlohmann::json tolerances_to_json(const Tolerances& t) {
  return {{"structure", t.structure},   {"cluster", t.cluster},
          {"sign", t.sign},             {"projection", t.projection},
          {"tau", t.tau},               {"margin", t.margin},
          {"rank", t.rank},             {"quadrature_points", t.quadrature_points},
          {"quadrature_max_points", t.quadrature_max_points}};
}

EnclosureRegion region_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) bad("region needs a 'type'");
  const std::string type = j["type"].get<std::string>();
  auto field = [&](const char* k) {
    if (!j.contains(k) || !j[k].is_number()) bad(std::string("region: missing number '") + k + "'");
    return j[k].get<double>();
  };
  if (type == "empty") return EnclosureRegion::empty();
  if (type == "capsule") return EnclosureRegion::capsule(field("p"), field("q"), field("r"));
  if (type == "ball_union") return EnclosureRegion::ball_union(field("gamma"), field("c0"), field("c1"));
  bad("unknown region type '" + type + "'");
}

nlohmann::json region_to_json(const EnclosureRegion& k) {
  if (const auto* c = std::get_if<Capsule>(&k.variant()))
    return {{"type", "capsule"}, {"p", c->p}, {"q", c->q}, {"r", c->r}};
  if (const auto* b = std::get_if<BallUnion>(&k.variant()))
    return {{"type", "ball_union"}, {"gamma", b->gamma}, {"c0", b->c0}, {"c1", b->c1}};
  return {{"type", "empty"}};
}

EnclosureRegion parse_region(std::string_view spec) {
  const std::string s(spec);
  if (s == "empty") return EnclosureRegion::empty();
  const auto colon = s.find(':');
  if (colon == std::string::npos) bad("region '" + s + "' must look like capsule:p,q,r or ball_union:gamma,c0,c1");
  const std::string type = s.substr(0, colon);
  std::vector<double> values;
  std::istringstream in(s.substr(colon + 1));
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      bad("region parameter '" + item + "' is not a number");
    }
  }
  if (values.size() != 3) bad("region '" + s + "' needs three parameters");
  if (type == "capsule") return EnclosureRegion::capsule(values[0], values[1], values[2]);
  if (type == "ball_union") return EnclosureRegion::ball_union(values[0], values[1], values[2]);
  bad("unknown region type '" + type + "'");
}

}  // namespace krein
