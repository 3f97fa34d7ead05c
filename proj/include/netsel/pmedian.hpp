#pragma once

#include <Eigen/Dense>
#include <vector>

namespace netsel {

/// Outcome of a p-median solve over an n x p assignment-cost matrix:
/// open exactly m rows minimizing the summed per-column minima.
/// +inf entries mark forbidden assignments.
struct PMedianResult {
  std::vector<int> open; // sorted, |open| == m
  double objective = 0.0;
  bool proven_optimal = false;
  long nodes_explored = 0;
};

/// Objective of a fixed open set, summed in fixed column order so every
/// engine and oracle sees bit-identical values.
double pmedian_objective(const Eigen::MatrixXd& cost, const std::vector<int>& open);

/// Exact branch-and-bound with column-minimum and saving-based lower
/// bounds, seeded by the local-search incumbent.
PMedianResult pmedian_exact(const Eigen::MatrixXd& cost, int m);

/// Greedy seed followed by best-improvement single swaps until 1-swap
/// optimal. Deterministic.
PMedianResult pmedian_local_search(const Eigen::MatrixXd& cost, int m);

/// Nonzero count of the assignment ILP constraint matrix, built
/// symbolically: one cardinality row, p assignment rows, n*p linking rows.
long long flp_constraint_nonzeros(int n, int p);

} // namespace netsel
