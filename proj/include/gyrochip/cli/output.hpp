#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gyrochip::cli {

// Shortest form is not used: every float gets 17 significant digits so files
// compare bitwise across platforms.
std::string format_double(double value);

// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// CSV with '#'-prefixed assumption lines above the header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value);
  // Flattens a JSON object into `# a.b: value` lines.
  void comments(const nlohmann::json& assumptions, const std::string& prefix = {});
  void row(const std::vector<double>& values);
  std::size_t rows() const noexcept { return rows_; }

  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string comments_;
  std::string body_;
  std::size_t rows_ = 0;
};

// JSON text with a trailing newline and 2-space indentation.
std::string dump_json(const nlohmann::json& value);

}  // namespace gyrochip::cli
