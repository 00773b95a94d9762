#include "mfts/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace mfts {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TableWriter::TableWriter(const std::filesystem::path& file) : out_(file) {
  if (!out_) throw std::runtime_error("cannot open output file: " + file.string());
}

void TableWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void TableWriter::header(std::span<const std::string> columns) {
  for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "\t" : "") << columns[i];
  out_ << "\n";
}

void TableWriter::row(std::span<const double> values) {
  for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "\t" : "") << format_double(values[i]);
  out_ << "\n";
}

void TableWriter::row_mixed(int64_t first, std::span<const double> rest) {
  out_ << first;
  for (double v : rest) out_ << "\t" << format_double(v);
  out_ << "\n";
}

std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open file: " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_content = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    bool ok = true;
    while (ss >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok || row.empty()) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      throw std::runtime_error("non-numeric row in " + file.string() + ": " + line);
    }
    first_content = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mfts
