#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "invasion/errors.hpp"

namespace invasion {

/// Full-precision scientific notation, "nan"/"inf" for non-finite values.
inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

inline std::string csv_number(std::uint64_t n) { return std::to_string(n); }

/// Writes `\n`-terminated rows; the header is written on construction.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
    if (!out_) throw ConfigError("cannot open '" + path + "' for writing");
    write_cells(header);
  }

  void row(std::initializer_list<double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(csv_number(v));
    write_cells(cells);
  }

  void row(const std::vector<std::string>& cells) { write_cells(cells); }

  const std::string& path() const noexcept { return path_; }

 private:
  void write_cells(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ConfigError("csv row width mismatch in '" + path_ + "'");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

}  // namespace invasion
