#include "latentkit/csv.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

namespace latentkit {

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::string& role, std::optional<std::uint64_t> seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());

  nlohmann::json manifest{{"rows", m.rows()}, {"cols", m.cols()}, {"role", role}};
  if (seed) manifest["seed"] = *seed;
  std::ofstream side(sidecar_path(path));
  side << manifest.dump(2) << '\n';
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* s = line.c_str();
    while (true) {
      char* end = nullptr;
      double v = std::strtod(s, &end);
      if (end == s) throw std::runtime_error("bad numeric field in " + path.string());
      if (!std::isfinite(v)) throw std::runtime_error("non-finite entry in " + path.string());
      row.push_back(v);
      s = end;
      while (*s == ' ') ++s;
      if (*s == ',') {
        ++s;
      } else if (*s == '\0') {
        break;
      } else {
        throw std::runtime_error("malformed row in " + path.string());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix file: " + path.string());

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];

  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    nlohmann::json manifest = nlohmann::json::parse(sin);
    const Index r = manifest.at("rows").get<Index>();
    const Index c = manifest.at("cols").get<Index>();
    if (r != m.rows() || c != m.cols())
      throw std::runtime_error("shape mismatch vs manifest for " + path.string());
  }
  return m;
}

}  // namespace latentkit
