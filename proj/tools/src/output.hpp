// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace robsem::cli {

/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// CSV text with `# key = value` metadata lines before the header row.
class CsvTable {
 public:
  CsvTable(std::vector<std::pair<std::string, std::string>> meta, std::vector<std::string> columns);
  void add_row(const std::vector<double>& row);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::string body_;
};

std::string hex64(std::uint64_t v);

}  // namespace robsem::cli
