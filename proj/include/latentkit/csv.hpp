#pragma once

#include "latentkit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace latentkit {

// Matrices travel as headerless CSV, one row per line, >= 17 significant
// digits so doubles round-trip. Each file gets a JSON sidecar (same stem,
// .json) recording {rows, cols, role, seed}; readers reject shape
// mismatches against the sidecar when it is present.

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::string& role,
                      std::optional<std::uint64_t> seed = std::nullopt);

Matrix read_matrix_csv(const std::filesystem::path& path);

/// Formats one double with 17 significant digits.
std::string format_double(double v);

}  // namespace latentkit
