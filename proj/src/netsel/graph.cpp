#include "netsel/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "netsel/errors.hpp"

namespace netsel {

Graph::Graph(int n, double gamma, double nu, std::vector<Edge> edges)
    : n_(n), gamma_(gamma), nu_(nu), edges_(std::move(edges)) {
  if (n_ < 1) throw config_error("graph needs at least one node");
  if (!(gamma_ > 0.0)) throw config_error("gamma must be positive");
  if (!(nu_ > 0.0)) throw config_error("nu must be positive");
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto [a, b] = edges_[i];
    if (a < 0 || a >= n_ || b < 0 || b >= n_)
      throw config_error("edge endpoint out of range");
    if (a == b) throw config_error("self-loop in edge set");
    if (i > 0 && edges_[i] == edges_[i - 1])
      throw config_error("duplicate edge in edge set");
  }
  out_.resize(n_);
  in_.resize(n_);
  for (const auto& [a, b] : edges_) {
    out_[a].push_back(b);
    in_[b].push_back(a);
  }
}

bool Graph::has_edge(int from, int to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

int Graph::max_in_degree() const {
  std::size_t best = 0;
  for (const auto& nb : in_) best = std::max(best, nb.size());
  return static_cast<int>(best);
}

bool Graph::is_edge_set_symmetric() const {
  for (const auto& [a, b] : edges_)
    if (!has_edge(b, a)) return false;
  return true;
}

NodeSet::NodeSet(std::vector<int> indices, int n) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= n)
      throw config_error("node index out of range");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw config_error("node set indices must be strictly increasing");
  }
}

NodeSet NodeSet::sorted_unchecked(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  NodeSet s;
  s.indices_ = std::move(indices);
  return s;
}

bool NodeSet::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

Eigen::MatrixXd state_matrix(const Graph& g) {
  const int n = g.n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.diagonal().setConstant(-g.nu());
  for (const auto& [from, to] : g.edges()) A(to, from) = g.gamma();
  return A;
}

Eigen::MatrixXd input_matrix(int n, const NodeSet& drivers) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, drivers.size());
  for (int c = 0; c < drivers.size(); ++c) B(drivers[c], c) = 1.0;
  return B;
}

Eigen::MatrixXd output_matrix(int n, const NodeSet& targets) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(targets.size(), n);
  for (int r = 0; r < targets.size(); ++r) C(r, targets[r]) = 1.0;
  return C;
}

double spectral_abscissa(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw numerical_error("eigen-decomposition failed in spectral_abscissa");
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Graph& g, double tol) {
  return spectral_abscissa(state_matrix(g)) < -tol;
}

} // namespace netsel
