// SPDX-License-Identifier: Apache-2.0
#include "output.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "robsem/error.hpp"

namespace robsem::cli {

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw InvalidArgument("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::pair<std::string, std::string>> meta,
                   std::vector<std::string> columns)
    : meta_(std::move(meta)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += format_double(row[i]);
  }
  body_ += '\n';
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& [k, v] : meta_) out += "# " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += ',';
    out += columns_[i];
  }
  out += '\n';
  return out + body_;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace robsem::cli
