#include "gyrochip/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "gyrochip/errors.hpp"

namespace gyrochip::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::comment(const std::string& key, const std::string& value) {
  comments_ += "# " + key + ": " + value + "\n";
}

void CsvTable::comment(const std::string& key, double value) { comment(key, format_double(value)); }

void CsvTable::comments(const nlohmann::json& assumptions, const std::string& prefix) {
  for (const auto& [key, value] : assumptions.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) comments(value, name);
    else if (value.is_number_float()) comment(name, value.get<double>());
    else if (value.is_string()) comment(name, value.get<std::string>());
    else comment(name, value.dump());
  }
}

void CsvTable::row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw Error("CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const {
  std::string header;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) header += ',';
    header += columns_[i];
  }
  return comments_ + header + "\n" + body_;
}

std::string dump_json(const nlohmann::json& value) { return value.dump(2) + "\n"; }

}  // namespace gyrochip::cli
