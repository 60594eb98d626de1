#pragma once

#include <string>
#include <vector>

namespace fsilab {

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  int num_rows() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
  const std::vector<double>& column(const std::string& header) const;
};

// Full double precision (17 significant digits) so repeated runs are
// byte-identical.
std::string format_double(double value);

void write_csv(const std::string& path, const Table& table);
Table read_csv(const std::string& path);

}  // namespace fsilab
