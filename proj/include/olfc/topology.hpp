#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace olfc {

// Physical + communication graphs of the multi-area network. Edge
// orientation is fixed at construction: the lower-index endpoint gets +1
// in the incidence column (sin is odd, so the dynamics are
// orientation-invariant).
struct NetworkTopology {
  int n_areas = 0;
  int n_conventional = 0;
  int n_wind = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based, stored with first < second
  Eigen::MatrixXd incidence;               // n x m signed incidence matrix A
  Eigen::VectorXd B_line;                  // per-edge susceptance, > 0
  Eigen::VectorXd B_self;                  // per-area self susceptance, < 0
  std::vector<std::pair<int, int>> comm_edges;

  int n_edges() const { return static_cast<int>(edges.size()); }
};

// Normalizes edge endpoint order, builds the incidence matrix, validates.
NetworkTopology make_topology(int n_areas, int n_conventional,
                              std::vector<std::pair<int, int>> edges,
                              Eigen::VectorXd B_line, Eigen::VectorXd B_self,
                              std::vector<std::pair<int, int>> comm_edges);

// Connectivity of both graphs, incidence column sums, susceptance signs,
// strict diagonal dominance |B_ii| > sum_j |B_ij|. Throws ConfigError.
void validate_topology(const NetworkTopology& topo);

bool graph_connected(int n, const std::vector<std::pair<int, int>>& edges);

Eigen::MatrixXd comm_laplacian(const NetworkTopology& topo);

}  // namespace olfc
