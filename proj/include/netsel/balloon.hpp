#pragma once

#include <Eigen/Dense>
#include <vector>

#include "netsel/graph.hpp"

namespace netsel {

/// Balloon graph: driver v0, b disjoint directed paths of length d to the
/// terminal node v_d. b > 1 requires d >= 2 (no parallel edges in a
/// simple graph).
struct BalloonSpec {
  int d = 1;
  int b = 1;
  double gamma = 1.0;
  double nu = 1.0;
};

/// Partition of the nodes into symmetry orbits.
struct OrbitPartition {
  std::vector<std::vector<int>> orbits;

  int orbit_count() const { return static_cast<int>(orbits.size()); }
  /// 0/1 indicator matrix E, one column per orbit.
  Eigen::MatrixXd indicator(int n) const;
};

Graph build_balloon(const BalloonSpec& spec);

/// Node index of the terminal target v_d.
int balloon_terminal(const BalloonSpec& spec);

/// Driver-reduced orbit partition of the balloon graph: v0 alone, one
/// orbit per interior depth, v_d alone.
OrbitPartition balloon_orbits(const BalloonSpec& spec);

/// True iff the permutation maps the edge set onto itself. perm[j] is the
/// image of node j and must be a bijection on [0, n).
bool is_symmetry(const Graph& g, const std::vector<int>& perm);

/// Quotient adjacency E^+ A E. The partition must be equitable: every node
/// of an orbit sees the same number of in-neighbors in each orbit.
Eigen::MatrixXd quotient_adjacency(const Graph& g, const OrbitPartition& part);

/// Closed-form Gramian element W_dd(t) of the balloon graph driven at v0:
/// (b^2 / 2nu) (gamma / 2nu)^(2d) binom(2d, d) [1 - e^{-2nu t} sum_{k<=2d} (2nu t)^k / k!].
/// t may be +inf, which drops the bracket.
double balloon_Wdd(const BalloonSpec& spec, double t);

/// Minimum energy beta^2 / (2 W_dd(t)) of the single-target maneuver.
double balloon_Jstar(const BalloonSpec& spec, double beta, double t);

} // namespace netsel
