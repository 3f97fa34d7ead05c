#pragma once

#include <Eigen/Dense>
#include <vector>

#include "netsel/graph.hpp"

namespace netsel {

/// Sentinel for an unreachable pair in integer distance matrices.
inline constexpr int kUnreachable = -1;

/// Exact rational, kept unreduced as (count - 2) / (distance - 1) so the
/// pairwise cost is reproducible bit-for-bit.
struct Rational {
  long long num = 0;
  long long den = 0; // 0 marks "undefined" (pairs with d < 2 or unreachable)
  bool defined() const { return den != 0; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Distances, redundancies, and pairwise costs for every
/// (candidate, target) pair. Candidates are all n nodes; column k belongs
/// to the k-th target.
struct StructureMatrices {
  NodeSet targets;
  Eigen::MatrixXi dist;             // n x p, kUnreachable when no path
  std::vector<Rational> redundancy; // n x p, row-major
  Eigen::MatrixXd cost;             // n x p, +inf when unreachable

  const Rational& redundancy_at(int j, int k) const {
    return redundancy[static_cast<std::size_t>(j) * dist.cols() + k];
  }
};

/// Hop distances from `source` to every node (forward BFS along out-edges).
std::vector<int> bfs_from(const Graph& g, int source);

/// Hop distances from every node to `sink` (reverse BFS along in-edges).
std::vector<int> bfs_to(const Graph& g, int sink);

/// dist[j][k] = directed hop distance from node j to target k, computed by
/// a reverse breadth-first search from each target.
Eigen::MatrixXi all_pairs_distance(const Graph& g, const NodeSet& targets);

/// Number of nodes lying on shortest paths from j to k:
/// #{l : d(j,l) + d(l,k) = d(j,k)}. Requires a finite distance.
int shortest_path_node_count(const std::vector<int>& dist_from_j,
                             const std::vector<int>& dist_to_k, int d_jk);

/// Redundancy (|V_jk| - 2) / (d_jk - 1); contract requires 2 <= d < inf.
Rational redundancy(const Graph& g, int j, int k, const std::vector<int>& dist_from_j,
                    const std::vector<int>& dist_to_k);

/// Structure-based assignment cost for a candidate at distance d with
/// redundancy r from a target: log((2 nu / r^2) (nu/gamma)^(2d) sqrt(pi d)).
/// d = 1 uses r = 1; d = 0 prices the self-assignment at log(2 nu);
/// d = kUnreachable yields +inf.
double pairwise_cost(int d, double r, double gamma, double nu);

StructureMatrices structure_matrices(const Graph& g, const NodeSet& targets);

/// Facility-location value of a driver set: sum over targets of the
/// cheapest assignment to any driver. +inf when some target is unreachable
/// from every driver.
double flp_set_cost(const StructureMatrices& sm, const NodeSet& drivers);
double flp_set_cost(const Eigen::MatrixXd& cost, const std::vector<int>& drivers);

} // namespace netsel
