#include "kcsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "kcsim/core.hpp"

namespace kcsim {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    if (fields[i].find_first_of(",\"\n") != std::string::npos) {
      line += '"';
      for (char ch : fields[i]) {
        if (ch == '"') line += '"';
        line += ch;
      }
      line += '"';
    } else {
      line += fields[i];
    }
  }
  return line;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Config, "cannot open '" + path + "' for writing");
  out << join(table.header) << '\n';
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) {
      throw Error(ErrorCode::InvalidArgument, "CSV row width does not match the header");
    }
    out << join(r) << '\n';
  }
  if (!out) throw Error(ErrorCode::Config, "write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, "cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Config, "'" + path + "' is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
  }
  return t;
}

CsvAppender::CsvAppender(const std::string& path, const std::vector<std::string>& header,
                         bool append)
    : width_(header.size()) {
  if (append) {
    std::ifstream probe(path, std::ios::binary);
    std::string first;
    if (probe && std::getline(probe, first)) {
      if (split(first) != header) {
        throw Error(ErrorCode::Config, "existing '" + path + "' has a different header");
      }
      out_.open(path, std::ios::binary | std::ios::app);
      if (!out_) throw Error(ErrorCode::Config, "cannot append to '" + path + "'");
      return;
    }
  }
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::Config, "cannot open '" + path + "' for writing");
  out_ << join(header) << '\n';
  out_.flush();
}

void CsvAppender::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) throw Error(ErrorCode::InvalidArgument, "CSV row width mismatch");
  out_ << join(fields) << '\n';
  out_.flush();
}

namespace csv_schema {

const std::vector<std::string>& levels() {
  static const std::vector<std::string> h{"level", "E_dw[Eh]", "E_kc[Eh]", "abs_dE[Eh]",
                                          "below_barrier"};
  return h;
}

const std::vector<std::string>& cscan() {
  static const std::vector<std::string> h{
      "c[a0]",          "level",           "abs_dE[Eh]",   "eps2_over_K[1]",
      "eps1_over_K[1]", "delta_over_K[1]", "inequality[1]", "chem_accurate",
      "device_feasible"};
  return h;
}

const std::vector<std::string>& trajectory() {
  static const std::vector<std::string> h{"t[hbar/Eh]", "P_left[1]", "P_right[1]", "overlap[1]",
                                          "trace[1]"};
  return h;
}

const std::vector<std::string>& heatmap() {
  static const std::vector<std::string> h{"eps1[K]", "eps2[K]", "T_X[hbar/K]", "status"};
  return h;
}

const std::vector<std::string>& table2() {
  static const std::vector<std::string> h{
      "system",       "engine",        "kappa[Eh/hbar]", "n_th[1]", "T_paper[hbar/Eh]",
      "tolerance[hbar/Eh]", "T_spectral[hbar/Eh]", "T_fit[hbar/Eh]", "T_fit_sigma[hbar/Eh]",
      "pass",         "status"};
  return h;
}

}  // namespace csv_schema

}  // namespace kcsim
