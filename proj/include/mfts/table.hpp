#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace mfts {

// Shortest representation that round-trips the exact double (%.17g).
std::string format_double(double v);

// Tab-separated table writer. Comment lines start with '#'. Doubles are
// written with format_double so identical values serialize byte-identically.
class TableWriter {
 public:
  explicit TableWriter(const std::filesystem::path& file);

  void comment(const std::string& text);
  void header(std::span<const std::string> columns);
  void row(std::span<const double> values);
  void row_mixed(int64_t first, std::span<const double> rest);

 private:
  std::ofstream out_;
};

// Parse all numeric rows of a delimited file (comma, tab or space separated),
// skipping '#' comments and a non-numeric header row.
std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& file);

}  // namespace mfts
