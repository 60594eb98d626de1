#include "fsilab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fsilab/errors.hpp"

namespace fsilab {

const std::vector<double>& Table::column(const std::string& header) const {
  for (std::size_t i = 0; i < headers.size(); ++i)
    if (headers[i] == header) return columns[i];
  throw std::invalid_argument("table: no column named '" + header + "'");
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const std::string& path, const Table& table) {
  if (table.headers.size() != table.columns.size())
    throw std::invalid_argument("write_csv: header/column count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    if (i) out << ',';
    out << table.headers[i];
  }
  out << '\n';
  const int rows = table.num_rows();
  for (const auto& col : table.columns)
    if (static_cast<int>(col.size()) != rows)
      throw std::invalid_argument("write_csv: ragged columns");
  for (int r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      out << format_double(table.columns[c][r]);
    }
    out << '\n';
  }
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file '" + path + "'");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.headers.push_back(cell);
  }
  table.columns.resize(table.headers.size());
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= table.columns.size())
        throw std::runtime_error("read_csv: extra cell in row " + std::to_string(row));
      table.columns[c++].push_back(std::stod(cell));
    }
    if (c != table.columns.size())
      throw std::runtime_error("read_csv: short row " + std::to_string(row));
    ++row;
  }
  return table;
}

}  // namespace fsilab
