#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "netsel/gramian.hpp"
#include "netsel/graph.hpp"
#include "netsel/random_util.hpp"
#include "netsel/structure.hpp"

namespace netsel {

/// Above this node count the FLP engine defaults to local search instead
/// of exact branch and bound.
inline constexpr int kFlpExactMaxN = 60;

struct SelectionProblem {
  const Graph* graph = nullptr;
  NodeSet targets;
  int m = 1;
  double t_f = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

struct SelectionDiagnostics {
  int iterations = 0;
  double wall_ms = 0.0;
  int rank_phase_len = -1;      // greedy: iterations scored by numerical rank
  int best_iterate = -1;        // lpgm: index of the best projected iterate
  bool proven_optimal = false;  // flp: exact engine finished
  long bb_nodes = 0;            // flp: branch-and-bound nodes
  bool output_controllable = true;
};

struct SelectionResult {
  NodeSet drivers;
  std::string method;
  double vol = std::numeric_limits<double>::infinity();
  double energy = std::numeric_limits<double>::infinity();
  double flp = std::numeric_limits<double>::infinity();
  SelectionDiagnostics diag;
};

/// Caches shared by every selector run against one (graph, targets, t_f)
/// problem: Schur factorization, per-driver contributions, structure
/// matrices. Built lazily; immutable once built.
class ProblemContext {
public:
  ProblemContext(const Graph& g, NodeSet targets, double t_f);

  const Graph& graph() const { return *graph_; }
  const NodeSet& targets() const { return targets_; }
  double horizon() const { return t_f_; }
  int n() const { return graph_->n(); }
  int p() const { return targets_.size(); }

  const GramianContext& gramian() const;
  const GramianSet& contributions() const; // all n candidates
  const StructureMatrices& structure() const;

  /// Evaluate the three surrogate costs of a driver set into `result`.
  void fill_costs(SelectionResult& result) const;

private:
  const Graph* graph_;
  NodeSet targets_;
  double t_f_;
  mutable std::unique_ptr<GramianContext> gramian_;
  mutable std::unique_ptr<GramianSet> contributions_;
  mutable std::unique_ptr<StructureMatrices> structure_;
};

/// Greedy set minimization with the numerical-rank phase: while the output
/// Gramian is rank deficient candidates are scored by -rank, afterwards by
/// -log det. Ties go to the lowest node index.
SelectionResult greedy_select(const ProblemContext& ctx, int m);

enum class FlpEngine { automatic, exact, local_search };

/// Driver selection by the p-median program over the structure cost
/// matrix.
SelectionResult flp_select(const ProblemContext& ctx, int m,
                           FlpEngine engine = FlpEngine::automatic);

struct LpgmParams {
  double eta0 = 1e-2; // initial step, halved when the smooth surrogate rises
  int iterations = 200;
  int slack = -1; // projection pool slack m0; -1 uses m
};

/// L0-constrained projected gradient descent on the expected energy;
/// returns the best projected support seen. Finite horizon only.
SelectionResult lpgm_select(const ProblemContext& ctx, int m, const LpgmParams& params,
                            std::uint64_t seed);

struct ProjectionResult {
  NodeSet support;        // m distinct rows
  Eigen::MatrixXd sparse; // one nonzero per selected row, distinct columns
  bool degenerate = false; // fewer than m positive row scores
};

/// Probabilistic projection of a dense input matrix onto an m-row support:
/// pool of the m+m0 largest row scores, rows sampled without replacement
/// proportionally to score, magnitudes m*r_j normalized by the selected
/// score mass.
ProjectionResult probabilistic_projection(const Eigen::MatrixXd& B, int m, int m0,
                                          Rng& rng);

/// Random-swap hill climb toward a prescribed facility-location value;
/// empty when no set within +-epsilon is found in max_iterations.
std::optional<NodeSet> hill_climb(const StructureMatrices& sm, int m, double target_cost,
                                  double epsilon, int max_iterations,
                                  std::uint64_t seed);

} // namespace netsel
