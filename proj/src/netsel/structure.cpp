#include "netsel/structure.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "netsel/errors.hpp"

namespace netsel {
namespace {

std::vector<int> bfs(const Graph& g, int root, bool reverse) {
  std::vector<int> dist(g.n(), kUnreachable);
  dist[root] = 0;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    const auto& next = reverse ? g.in_neighbors(u) : g.out_neighbors(u);
    for (int v : next) {
      if (dist[v] != kUnreachable) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

} // namespace

std::vector<int> bfs_from(const Graph& g, int source) { return bfs(g, source, false); }

std::vector<int> bfs_to(const Graph& g, int sink) { return bfs(g, sink, true); }

Eigen::MatrixXi all_pairs_distance(const Graph& g, const NodeSet& targets) {
  Eigen::MatrixXi dist(g.n(), targets.size());
  for (int k = 0; k < targets.size(); ++k) {
    auto col = bfs_to(g, targets[k]);
    for (int j = 0; j < g.n(); ++j) dist(j, k) = col[j];
  }
  return dist;
}

int shortest_path_node_count(const std::vector<int>& dist_from_j,
                             const std::vector<int>& dist_to_k, int d_jk) {
  int count = 0;
  for (std::size_t l = 0; l < dist_from_j.size(); ++l) {
    if (dist_from_j[l] == kUnreachable || dist_to_k[l] == kUnreachable) continue;
    if (dist_from_j[l] + dist_to_k[l] == d_jk) ++count;
  }
  return count;
}

Rational redundancy(const Graph& g, int j, int k, const std::vector<int>& dist_from_j,
                    const std::vector<int>& dist_to_k) {
  const int d = dist_from_j[k];
  if (d == kUnreachable || d < 2)
    throw config_error("redundancy requires 2 <= dist(j,k) < inf");
  (void)g;
  const int nodes_on_paths = shortest_path_node_count(dist_from_j, dist_to_k, d);
  return Rational{nodes_on_paths - 2, d - 1};
}

double pairwise_cost(int d, double r, double gamma, double nu) {
  if (!(gamma > 0.0) || !(nu > 0.0))
    throw config_error("pairwise_cost needs positive gamma and nu");
  if (d == kUnreachable) return std::numeric_limits<double>::infinity();
  if (d < 0) throw config_error("pairwise_cost: negative distance");
  if (d == 0) return std::log(2.0 * nu);
  if (d == 1) r = 1.0;
  // log((2 nu / r^2) (nu/gamma)^(2d) sqrt(pi d)), evaluated in log space
  return std::log(2.0 * nu) - 2.0 * std::log(r) + 2.0 * d * std::log(nu / gamma) +
         0.5 * std::log(std::numbers::pi * d);
}

StructureMatrices structure_matrices(const Graph& g, const NodeSet& targets) {
  const int n = g.n();
  const int p = targets.size();
  StructureMatrices sm;
  sm.targets = targets;
  sm.dist = all_pairs_distance(g, targets);
  sm.redundancy.assign(static_cast<std::size_t>(n) * p, Rational{});
  sm.cost.resize(n, p);

  std::vector<std::vector<int>> to_target(p);
  for (int k = 0; k < p; ++k) to_target[k] = bfs_to(g, targets[k]);

  for (int j = 0; j < n; ++j) {
    std::vector<int> from_j; // computed lazily, only when some pair needs it
    for (int k = 0; k < p; ++k) {
      const int d = sm.dist(j, k);
      if (d >= 2) {
        if (from_j.empty()) from_j = bfs_from(g, j);
        Rational r = redundancy(g, j, targets[k], from_j, to_target[k]);
        sm.redundancy[static_cast<std::size_t>(j) * p + k] = r;
        sm.cost(j, k) = pairwise_cost(d, r.value(), g.gamma(), g.nu());
      } else {
        sm.cost(j, k) = pairwise_cost(d, 1.0, g.gamma(), g.nu());
      }
    }
  }
  return sm;
}

double flp_set_cost(const Eigen::MatrixXd& cost, const std::vector<int>& drivers) {
  if (drivers.empty()) throw config_error("flp_set_cost: empty driver set");
  double total = 0.0;
  for (int k = 0; k < cost.cols(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int j : drivers) best = std::min(best, cost(j, k));
    total += best;
  }
  return total;
}

double flp_set_cost(const StructureMatrices& sm, const NodeSet& drivers) {
  return flp_set_cost(sm.cost, drivers.indices());
}

} // namespace netsel
