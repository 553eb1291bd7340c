#include "latentkit/csv.hpp"

#include "latentkit/core.hpp"
#include "latentkit/manifest.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>

using namespace latentkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("latentkit_test_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("matrix CSV round-trips bit-exactly") {
  const auto dir = temp_dir();
  Matrix m = sample_gaussian(7, 5, RngSeed{1}).data;
  m(0, 0) = 1e-300;
  m(1, 1) = -3.141592653589793e117;
  m(2, 2) = 0.0;
  write_matrix_csv(dir / "m.csv", m, "test");
  const Matrix back = read_matrix_csv(dir / "m.csv");
  CHECK(back == m);
}

TEST_CASE("sidecar manifest shape mismatch is rejected") {
  const auto dir = temp_dir();
  const Matrix m = sample_gaussian(4, 3, RngSeed{2}).data;
  write_matrix_csv(dir / "m.csv", m, "test", 42);

  nlohmann::json side;
  {
    std::ifstream in(dir / "m.json");
    side = nlohmann::json::parse(in);
  }
  CHECK(side.at("rows") == 4);
  CHECK(side.at("cols") == 3);
  CHECK(side.at("role") == "test");
  CHECK(side.at("seed") == 42);

  side["rows"] = 5;
  std::ofstream(dir / "m.json") << side.dump();
  CHECK_THROWS_AS(read_matrix_csv(dir / "m.csv"), std::runtime_error);
}

TEST_CASE("malformed CSV inputs are rejected") {
  const auto dir = temp_dir();
  std::ofstream(dir / "ragged.csv") << "1,2,3\n4,5\n";
  CHECK_THROWS_AS(read_matrix_csv(dir / "ragged.csv"), std::runtime_error);

  std::ofstream(dir / "junk.csv") << "1,zz\n";
  CHECK_THROWS_AS(read_matrix_csv(dir / "junk.csv"), std::runtime_error);

  std::ofstream(dir / "inf.csv") << "1,inf\n";
  CHECK_THROWS_AS(read_matrix_csv(dir / "inf.csv"), std::runtime_error);

  std::ofstream(dir / "empty.csv") << "";
  CHECK_THROWS_AS(read_matrix_csv(dir / "empty.csv"), std::runtime_error);

  CHECK_THROWS_AS(read_matrix_csv(dir / "missing.csv"), std::runtime_error);
}

TEST_CASE("fnv1a64 matches published vectors") {
  CHECK(fnv1a64(nullptr, 0) == 14695981039346656037ULL);
  CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
  CHECK(hash_hex(0xaf63dc4c8601ec8cULL) == "0xaf63dc4c8601ec8c");
}

TEST_CASE("run manifests record hashes that recompute") {
  const auto dir = temp_dir();
  std::ofstream(dir / "input.txt") << "payload";

  RunManifest manifest;
  manifest.command = "demo";
  manifest.parameters = {{"x", 1}};
  manifest.seed = 7;
  manifest.input_hashes[(dir / "input.txt").string()] =
      hash_hex(hash_file(dir / "input.txt"));
  write_run_manifest(dir, manifest);

  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("command") == "demo");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("artifact_version") == kArtifactVersion);
  CHECK(j.at("hash_algorithm") == "fnv1a-64");
  for (const auto& [file, expected] : j.at("input_hashes").items())
    CHECK(hash_hex(hash_file(file)) == expected.get<std::string>());
}
