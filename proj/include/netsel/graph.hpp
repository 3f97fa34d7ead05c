#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace netsel {

/// Directed edge "from first to second", 0-based node indices.
using Edge = std::pair<int, int>;

/// Directed graph with uniform edge weight gamma and uniform loop weight
/// -nu on every node. Loops are never part of the edge set. Immutable
/// after construction; safe to share across threads.
class Graph {
public:
  Graph(int n, double gamma, double nu, std::vector<Edge> edges);

  int n() const { return n_; }
  double gamma() const { return gamma_; }
  double nu() const { return nu_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(int from, int to) const;

  /// Out-neighbors of node j (edges j -> k).
  const std::vector<int>& out_neighbors(int j) const { return out_[j]; }
  /// In-neighbors of node j (edges k -> j).
  const std::vector<int>& in_neighbors(int j) const { return in_[j]; }

  int max_in_degree() const;

  /// True when every edge (j,k) has its reverse (k,j) present.
  bool is_edge_set_symmetric() const;

private:
  int n_;
  double gamma_;
  double nu_;
  std::vector<Edge> edges_; // sorted, unique, no loops
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// Strictly increasing list of distinct node indices in [0, n).
class NodeSet {
public:
  NodeSet() = default;
  NodeSet(std::vector<int> indices, int n);

  /// Unchecked variant for internal callers that already hold sorted
  /// distinct indices.
  static NodeSet sorted_unchecked(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(int j) const;
  int operator[](int i) const { return indices_[i]; }

  bool operator==(const NodeSet& other) const { return indices_ == other.indices_; }

private:
  std::vector<int> indices_;
};

/// State matrix of the node dynamics: diagonal -nu, entry (j,k) = gamma
/// iff the edge (v_k -> v_j) exists. Note the transpose convention: an
/// edge from k to j feeds row j.
Eigen::MatrixXd state_matrix(const Graph& g);

/// Input selector: column per driver node, one unit entry each.
Eigen::MatrixXd input_matrix(int n, const NodeSet& drivers);

/// Output selector: row per target node, one unit entry each.
Eigen::MatrixXd output_matrix(int n, const NodeSet& targets);

/// True iff the spectral abscissa of state_matrix(g) is below -tol.
bool is_hurwitz(const Graph& g, double tol = 1e-12);

/// Spectral abscissa (max real part of the eigenvalues) of a dense matrix.
double spectral_abscissa(const Eigen::MatrixXd& A);

} // namespace netsel
