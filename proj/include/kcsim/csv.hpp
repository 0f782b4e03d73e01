#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace kcsim {

/// 12 significant digits, '.' decimal separator; "nan" for NaN.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Writes header and rows with LF line endings. Throws Config on I/O failure.
void write_csv(const std::string& path, const CsvTable& table);

CsvTable read_csv(const std::string& path);

/// Row-at-a-time writer that flushes after each row. In append mode the
/// header is checked against the existing file instead of rewritten.
class CsvAppender {
 public:
  CsvAppender(const std::string& path, const std::vector<std::string>& header, bool append);
  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::size_t width_;
};

/// Column layouts shared with the plotting scripts.
namespace csv_schema {
const std::vector<std::string>& levels();
const std::vector<std::string>& cscan();
const std::vector<std::string>& trajectory();
const std::vector<std::string>& heatmap();
const std::vector<std::string>& table2();
}  // namespace csv_schema

}  // namespace kcsim
