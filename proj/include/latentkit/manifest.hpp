#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace latentkit {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// 64-bit FNV-1a over a byte range.
std::uint64_t fnv1a64(const void* data, std::size_t n);

std::uint64_t hash_file(const std::filesystem::path& path);

std::string hash_hex(std::uint64_t h);

/// Provenance record written once per output directory as manifest.json.
struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::map<std::string, std::string> input_hashes;
  std::uint64_t seed = 0;
  std::string artifact_version = kArtifactVersion;
};

void write_run_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace latentkit
