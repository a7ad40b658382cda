#pragma once

// Deterministic text output: 17-significant-digit numeric formatting, CSV
// writing, and JSON helpers (ordered keys so reruns are byte-identical).

#include <Eigen/Sparse>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fichera {

using Json = nlohmann::ordered_json;

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
}

// CSV with a header row; every cell is already formatted text.
inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  write_text_file(path, out);
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// CSV preceded by `# key=value` provenance comment lines.
inline void write_csv_with_meta(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& meta,
    const std::vector<std::string>& header,
    const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  for (size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  write_text_file(path, out);
}

// Coordinate-format sparse matrix: one `row col value` line per stored
// entry, 0-based indices, 17 significant digits.
inline std::string format_coo_matrix(const Eigen::SparseMatrix<double>& A) {
  std::string out;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      out += std::to_string(it.row()) + " " + std::to_string(it.col()) + " " +
             fmt_g17(it.value()) + "\n";
  return out;
}

}  // namespace fichera
