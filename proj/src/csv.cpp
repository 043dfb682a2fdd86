#include "olfc/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "olfc/errors.hpp"

namespace olfc {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows) {
  if (header.size() != static_cast<std::size_t>(rows.cols()))
    throw ConfigError("write_csv: header/column mismatch for " + path);
  std::ofstream f(path);
  if (!f) throw ConfigError("write_csv: cannot open " + path);
  for (std::size_t c = 0; c < header.size(); ++c)
    f << (c ? "," : "") << header[c];
  f << '\n';
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c)
      f << (c ? "," : "") << format_g17(rows(r, c));
    f << '\n';
  }
  if (!f) throw ConfigError("write_csv: write failed for " + path);
}

Eigen::MatrixXd read_csv(const std::string& path,
                         std::vector<std::string>* header) {
  std::ifstream f(path);
  if (!f) throw ConfigError("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line))
    throw ConfigError("read_csv: empty file " + path);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
  }
  if (header) *header = cols;
  const std::size_t ncol = cols.size();
  std::vector<double> data;
  std::size_t nrow = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::size_t field = 0;
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      data.push_back(std::strtod(p, &end));
      if (end == p)
        throw ConfigError("read_csv: bad number in " + path + " row " +
                          std::to_string(nrow + 1));
      ++field;
      p = end;
      if (*p == ',') {
        ++p;
      } else if (*p == '\0' || *p == '\r') {
        break;
      } else {
        throw ConfigError("read_csv: bad separator in " + path + " row " +
                          std::to_string(nrow + 1));
      }
    }
    if (field != ncol)
      throw ConfigError("read_csv: ragged row " + std::to_string(nrow + 1) +
                        " in " + path);
    ++nrow;
  }
  Eigen::MatrixXd out(nrow, ncol);
  for (std::size_t r = 0; r < nrow; ++r)
    for (std::size_t c = 0; c < ncol; ++c) out(r, c) = data[r * ncol + c];
  return out;
}

}  // namespace olfc
