#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>

#include "netsel/graph.hpp"
#include "netsel/lyapunov.hpp"

namespace netsel {

/// Per-driver output-Gramian contributions C W_k(t_f) C^T. Summing the
/// contributions of a driver set gives that set's output Gramian.
struct GramianSet {
  double horizon = std::numeric_limits<double>::infinity();
  NodeSet targets;
  std::map<int, Eigen::MatrixXd> contributions;

  const Eigen::MatrixXd& contribution(int node) const;
  Eigen::MatrixXd output_gramian(const NodeSet& drivers) const;
};

/// A concrete steering task: drive the target outputs from the free
/// response of x0 to yf. beta is always recomputed from its inputs.
struct Maneuver {
  Eigen::VectorXd x0;
  Eigen::VectorXd yf;

  Eigen::VectorXd beta(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                       double t_f) const;
};

/// Shared per-problem state: Schur factorization of A and e^{A t_f},
/// reused across the many Gramian solves a selection run needs.
class GramianContext {
public:
  GramianContext(const Graph& g, const NodeSet& targets, double t_f);
  GramianContext(Eigen::MatrixXd A, const NodeSet& targets, double t_f, int n);

  double horizon() const { return horizon_; }
  const NodeSet& targets() const { return targets_; }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& C() const { return C_; }
  const LyapunovSolver& solver() const { return solver_; }
  /// e^{A t_f}; only valid for a finite horizon.
  const Eigen::MatrixXd& exp_Atf() const;

  /// W(t_f) for an arbitrary symmetric PSD Q (quadrature when A is not
  /// Hurwitz and the horizon is finite).
  Eigen::MatrixXd full_gramian(const Eigen::MatrixXd& Q) const;

  /// Output Gramian of a driver set in one Lyapunov solve (Q = B B^T).
  Eigen::MatrixXd output_gramian(const NodeSet& drivers) const;

private:
  Eigen::MatrixXd A_;
  NodeSet targets_;
  double horizon_;
  Eigen::MatrixXd C_;
  LyapunovSolver solver_;
  std::optional<Eigen::MatrixXd> exp_Atf_;
};

/// Solve one Lyapunov problem per candidate (Q = e_k e_k^T) and keep the
/// p x p output resolution of each contribution.
GramianSet driver_contributions(const Graph& g, const NodeSet& targets,
                                const NodeSet& candidates, double t_f);
GramianSet driver_contributions(const GramianContext& ctx, const NodeSet& candidates);

/// log det of a symmetric PSD matrix via Cholesky, falling back to an
/// eigenvalue floor at rel_tol * lambda_max. Rank-deficient input yields
/// -inf. rel_tol < 0 selects the default p * machine epsilon.
double log_det_psd(const Eigen::MatrixXd& Wbar, double rel_tol = -1.0);

/// #{eigenvalues > rel_tol * lambda_max}; 0 when lambda_max <= 0.
int numerical_rank(const Eigen::MatrixXd& Wbar, double rel_tol = -1.0);

/// Ellipsoid-volume cost -log det of the driver set's output Gramian;
/// +inf when the set is not output controllable.
double vol_cost(const GramianSet& gs, const NodeSet& drivers);
double vol_cost_of_output(const Eigen::MatrixXd& Wbar);

/// Expected steering energy Tr(C^T Wbar^{-1} C X_f) with
/// X_f = e^{A t_f} e^{A^T t_f}; 0 at t_f = inf (X_f vanishes), +inf when
/// Wbar is singular (rank_out, when given, receives its numerical rank).
double expected_energy(const GramianSet& gs, const NodeSet& drivers,
                       const Eigen::MatrixXd& A, int* rank_out = nullptr);
double expected_energy_of_output(const Eigen::MatrixXd& Wbar, const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& C, double t_f,
                                 int* rank_out = nullptr);

/// Exact minimum energy 0.5 beta^T Wbar^{-1} beta of one maneuver.
double optimal_energy(const GramianSet& gs, const NodeSet& drivers, const Maneuver& mv,
                      const Eigen::MatrixXd& A);

} // namespace netsel
