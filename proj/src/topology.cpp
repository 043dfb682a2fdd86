#include "olfc/topology.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "olfc/errors.hpp"

namespace olfc {

bool graph_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 0) return false;
  if (n == 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

NetworkTopology make_topology(int n_areas, int n_conventional,
                              std::vector<std::pair<int, int>> edges,
                              Eigen::VectorXd B_line, Eigen::VectorXd B_self,
                              std::vector<std::pair<int, int>> comm_edges) {
  NetworkTopology topo;
  topo.n_areas = n_areas;
  topo.n_conventional = n_conventional;
  topo.n_wind = n_areas - n_conventional;
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  for (auto& e : comm_edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  topo.edges = std::move(edges);
  topo.comm_edges = std::move(comm_edges);
  topo.B_line = std::move(B_line);
  topo.B_self = std::move(B_self);

  const int m = topo.n_edges();
  topo.incidence = Eigen::MatrixXd::Zero(n_areas, m);
  for (int k = 0; k < m; ++k) {
    const auto& [i, j] = topo.edges[k];
    if (i >= 0 && i < n_areas && j >= 0 && j < n_areas) {
      topo.incidence(i, k) = 1.0;
      topo.incidence(j, k) = -1.0;
    }
  }
  validate_topology(topo);
  return topo;
}

void validate_topology(const NetworkTopology& topo) {
  const int n = topo.n_areas;
  const int m = topo.n_edges();
  if (n < 1) throw ConfigError("topology: n_areas must be >= 1");
  if (topo.n_conventional < 0 || topo.n_conventional > n)
    throw ConfigError("topology: n_conventional out of range");
  if (topo.B_line.size() != m)
    throw ConfigError("topology: B_line needs one entry per edge");
  if (topo.B_self.size() != n)
    throw ConfigError("topology: B_self needs one entry per area");

  std::set<std::pair<int, int>> seen;
  for (int k = 0; k < m; ++k) {
    const auto& [i, j] = topo.edges[k];
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw ConfigError("topology: edge " + std::to_string(k + 1) +
                        " references an unknown area");
    if (i == j)
      throw ConfigError("topology: edge " + std::to_string(k + 1) +
                        " is a self-loop");
    if (!seen.insert({i, j}).second)
      throw ConfigError("topology: duplicate edge " + std::to_string(i + 1) +
                        "-" + std::to_string(j + 1));
    if (!(topo.B_line(k) > 0.0))
      throw ConfigError("topology: B_line must be > 0 on edge " +
                        std::to_string(k + 1));
  }
  for (const auto& [i, j] : topo.comm_edges)
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw ConfigError("topology: invalid communication edge");

  if (m > 0 && !graph_connected(n, topo.edges))
    throw ConfigError("topology: physical graph is not connected");
  if (n > 1 && !graph_connected(n, topo.comm_edges))
    throw ConfigError("topology: communication graph is not connected");
  if (n > 1 && m == 0)
    throw ConfigError("topology: physical graph is not connected");

  for (int i = 0; i < n; ++i) {
    if (!(topo.B_self(i) < 0.0))
      throw ConfigError("topology: B_self must be < 0 in area " +
                        std::to_string(i + 1));
    double row = 0.0;
    for (int k = 0; k < m; ++k)
      if (topo.edges[k].first == i || topo.edges[k].second == i)
        row += std::abs(topo.B_line(k));
    if (!(std::abs(topo.B_self(i)) > row))
      throw ConfigError(
          "topology: susceptance dominance |B_ii| > sum |B_ij| fails in area " +
          std::to_string(i + 1));
  }

  for (int k = 0; k < m; ++k) {
    if (topo.incidence.col(k).sum() != 0.0 ||
        topo.incidence.col(k).cwiseAbs().sum() != 2.0)
      throw ConfigError("topology: malformed incidence column");
  }
}

Eigen::MatrixXd comm_laplacian(const NetworkTopology& topo) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(topo.n_areas, topo.n_areas);
  for (const auto& [i, j] : topo.comm_edges) {
    L(i, i) += 1.0;
    L(j, j) += 1.0;
    L(i, j) -= 1.0;
    L(j, i) -= 1.0;
  }
  return L;
}

}  // namespace olfc
