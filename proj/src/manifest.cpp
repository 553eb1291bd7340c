#include "latentkit/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

namespace latentkit {

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(buf.data(), buf.size());
}

std::string hash_hex(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_run_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  nlohmann::json j{
      {"command", manifest.command},
      {"parameters", manifest.parameters},
      {"input_hashes", manifest.input_hashes},
      {"seed", manifest.seed},
      {"artifact_version", manifest.artifact_version},
      {"hash_algorithm", "fnv1a-64"},
  };
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

}  // namespace latentkit
