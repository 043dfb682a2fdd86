#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace olfc {

// 17 significant digits: doubles round-trip bit-exactly through the file.
std::string format_g17(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);

Eigen::MatrixXd read_csv(const std::string& path,
                         std::vector<std::string>* header = nullptr);

}  // namespace olfc
