#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "krein/linalg.hpp"
#include "krein/regions.hpp"
#include "krein/tolerances.hpp"

namespace krein {

/// Reads coordinate or array Matrix Market files with real, integer or
/// complex fields and general, symmetric, skew-symmetric or hermitian
/// storage.
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::filesystem::path& path);

/// Always writes "coordinate complex general" with 17 significant digits,
/// which reads back bit-identically.
void write_matrix_market(std::ostream& out, const Matrix& m);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

/// Binds matrix files to the roles J, A, V. Relative paths are resolved
/// against the manifest's directory.
struct Manifest {
  std::filesystem::path source;
  std::optional<std::filesystem::path> j_path;
  std::optional<std::pair<int, int>> signature;
  std::optional<std::filesystem::path> a_path;
  std::optional<std::filesystem::path> v_path;
  nlohmann::json tolerances = nlohmann::json::object();
  std::optional<std::filesystem::path> output;
  std::optional<EnclosureRegion> region;
};

Manifest read_manifest(const std::filesystem::path& path);
Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Paths are written as given (relative paths stay relative).
nlohmann::json manifest_to_json(const Manifest& m);

/// Overrides by field name; unknown names and non-positive values are rejected.
Tolerances apply_tolerance_overrides(Tolerances base, const nlohmann::json& overrides);
nlohmann::json tolerances_to_json(const Tolerances& tol);

/// {"type": "capsule", "p", "q", "r"}, {"type": "ball_union", "gamma", "c0",
/// "c1"} or {"type": "empty"}.
EnclosureRegion region_from_json(const nlohmann::json& j);
nlohmann::json region_to_json(const EnclosureRegion& k);

/// "capsule:p,q,r", "ball_union:gamma,c0,c1" or "empty".
EnclosureRegion parse_region(std::string_view spec);

}  // namespace krein
