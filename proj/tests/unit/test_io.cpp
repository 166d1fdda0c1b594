#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "krein/instances.hpp"
#include "krein/io.hpp"

using namespace krein;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("krein_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(MatrixMarket, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Matrix m(5, 4);
  for (Index r = 0; r < 5; ++r)
    for (Index c = 0; c < 4; ++c) m(r, c) = Complex(u(rng) / 7.0, (r + c) % 3 ? u(rng) / 3.0 : 0.0);
  m(1, 1) = Complex(0.0, 0.0);
  m(2, 3) = Complex(1e-300, -4.9e-324);
  std::stringstream s;
  write_matrix_market(s, m);
  const Matrix back = read_matrix_market(s);
  ASSERT_EQ(back.rows(), 5);
  ASSERT_EQ(back.cols(), 4);
  for (Index r = 0; r < 5; ++r)
    for (Index c = 0; c < 4; ++c) {
      EXPECT_EQ(back(r, c).real(), m(r, c).real());
      EXPECT_EQ(back(r, c).imag(), m(r, c).imag());
    }
}

TEST(MatrixMarket, GeneratedInstanceRoundTrip) {
  InstanceSpec spec;
  spec.kind = InstanceKind::RandomNonnegative;
  spec.seed = 77;
  spec.dimension = 9;
  spec.mix_basis = true;
  const auto inst = generate(spec);
  const fs::path dir = scratch_dir("roundtrip");
  write_matrix_market(dir / "A.mtx", inst.a);
  write_matrix_market(dir / "J.mtx", inst.j.matrix());
  EXPECT_EQ(read_matrix_market(dir / "A.mtx"), inst.a);
  EXPECT_EQ(read_matrix_market(dir / "J.mtx"), inst.j.matrix());
}

TEST(MatrixMarket, StorageVariants) {
  std::istringstream sym(
      "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 3\n2 1 -1.5\n");
  Matrix m = read_matrix_market(sym);
  EXPECT_EQ(m(0, 1), Complex(-1.5));
  EXPECT_EQ(m(1, 0), Complex(-1.5));

  std::istringstream herm("%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n2 1 1 2\n");
  m = read_matrix_market(herm);
  EXPECT_EQ(m(1, 0), Complex(1, 2));
  EXPECT_EQ(m(0, 1), Complex(1, -2));

  std::istringstream skew("%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 4\n");
  m = read_matrix_market(skew);
  EXPECT_EQ(m(0, 1), Complex(-4));

  std::istringstream arr("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  m = read_matrix_market(arr);
  EXPECT_EQ(m(1, 0), Complex(2));  // column-major
  EXPECT_EQ(m(0, 1), Complex(3));
}

TEST(MatrixMarket, MalformedInputRejected) {
  for (const char* text : {"", "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n",
                           "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n",
                           "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
                           "not a header\n1 1 1\n1 1 1\n"}) {
    std::istringstream in(text);
    try {
      read_matrix_market(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
  }
  EXPECT_THROW(read_matrix_market(fs::path("/nonexistent/A.mtx")), Error);
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path dir = scratch_dir("sha");
  write_text(dir / "f.txt", "abc");
  EXPECT_EQ(file_sha256(dir / "f.txt"), sha256_hex("abc"));
}

TEST(Manifest, ResolvesRelativePaths) {
  const fs::path dir = scratch_dir("manifest");
  write_text(dir / "manifest.json",
             R"({"J": "J.mtx", "A": "sub/A.mtx", "tolerances": {"cluster": 1e-6}, "output": "out",
                 "region": {"type": "capsule", "p": -1, "q": 1, "r": 0.5}})");
  const auto m = read_manifest(dir / "manifest.json");
  EXPECT_EQ(*m.j_path, dir / "J.mtx");
  EXPECT_EQ(*m.a_path, dir / "sub/A.mtx");
  EXPECT_FALSE(m.v_path.has_value());
  EXPECT_EQ(*m.output, dir / "out");
  ASSERT_TRUE(m.region.has_value());
  EXPECT_EQ(m.region->parameter_string(), "p=-1,q=1,r=0.5");
  EXPECT_DOUBLE_EQ(m.tolerances["cluster"].get<double>(), 1e-6);
}

TEST(Manifest, RejectsBadContent) {
  const fs::path dir = scratch_dir("manifest_bad");
  for (const char* text : {R"({"A": "A.mtx", "colour": 1})", R"({"J": "J.mtx", "signature": [1, 1], "A": "A.mtx"})",
                           R"({"A": 3})", "{not json"}) {
    write_text(dir / "m.json", text);
    try {
      read_manifest(dir / "m.json");
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput) << text;
    }
  }
}

TEST(Manifest, SignatureForm) {
  const auto m = manifest_from_json(nlohmann::json::parse(R"({"signature": [2, 3], "A": "A.mtx"})"), "/base");
  ASSERT_TRUE(m.signature.has_value());
  EXPECT_EQ(m.signature->first, 2);
  EXPECT_EQ(m.signature->second, 3);
  EXPECT_EQ(manifest_to_json(m)["signature"], nlohmann::json::array({2, 3}));
}

TEST(Tolerances, OverridesByName) {
  const auto t = apply_tolerance_overrides(Tolerances{}, {{"cluster", 1e-6}, {"quadrature_points", 128}});
  EXPECT_DOUBLE_EQ(t.cluster, 1e-6);
  EXPECT_EQ(t.quadrature_points, 128);
  EXPECT_DOUBLE_EQ(t.sign, Tolerances{}.sign);
  EXPECT_THROW(apply_tolerance_overrides(Tolerances{}, {{"bogus", 1.0}}), Error);
  EXPECT_THROW(apply_tolerance_overrides(Tolerances{}, {{"cluster", -1.0}}), Error);
  EXPECT_THROW(apply_tolerance_overrides(Tolerances{}, {{"cluster", "small"}}), Error);
  const auto j = tolerances_to_json(t);
  EXPECT_DOUBLE_EQ(j["cluster"].get<double>(), 1e-6);
}

TEST(Regions, ParseAndSerialize) {
  EXPECT_EQ(parse_region("capsule:-1,2,0.5").parameter_string(), "p=-1,q=2,r=0.5");
  EXPECT_EQ(parse_region("ball_union:1,0.25,0.25").variant_name(), "ball_union");
  EXPECT_TRUE(parse_region("empty").is_empty());
  EXPECT_THROW(parse_region("capsule:1,2"), Error);
  EXPECT_THROW(parse_region("disc:1,2,3"), Error);
  const auto k = EnclosureRegion::ball_union(0.3, 1.0 / 3.0, 0.1);
  EXPECT_EQ(region_from_json(region_to_json(k)).parameter_string(), k.parameter_string());
}
