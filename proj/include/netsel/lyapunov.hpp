#pragma once

#include <Eigen/Dense>

namespace netsel {

/// Bartels-Stewart solver for A W + W A^T + Q = 0. Holds the real Schur
/// factorization of A so repeated solves against the same A only pay the
/// quasi-triangular back-substitution.
class LyapunovSolver {
public:
  explicit LyapunovSolver(Eigen::MatrixXd A);

  int n() const { return static_cast<int>(T_.rows()); }
  double spectral_abscissa() const { return abscissa_; }
  bool hurwitz(double tol = 1e-12) const { return abscissa_ < -tol; }

  /// Solve A W + W A^T + Q = 0 for symmetric PSD Q. Refuses non-Hurwitz A.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& Q) const;

private:
  Eigen::MatrixXd U_; // orthogonal
  Eigen::MatrixXd T_; // upper quasi-triangular, A = U T U^T
  std::vector<int> block_start_;
  std::vector<int> block_size_;
  double abscissa_;
};

/// One-shot algebraic Lyapunov solve, A W + W A^T + Q = 0.
Eigen::MatrixXd lyapunov_infinite(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

/// Scaling-and-squaring matrix exponential.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

/// Finite-horizon Gramian W(t_f) = int_0^{t_f} e^{At} Q e^{A^T t} dt.
/// Hurwitz A uses W(t_f) = W(inf) - e^{A t_f} W(inf) e^{A^T t_f}; otherwise
/// the integral is evaluated by adaptive quadrature. t_f = +inf is allowed
/// for Hurwitz A and t_f = 0 gives the zero matrix.
Eigen::MatrixXd gramian_finite(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                               double t_f);

/// Adaptive-Simpson evaluation of the Gramian integral; the independent
/// route used to cross-check the identity above.
Eigen::MatrixXd gramian_quadrature(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                                   double t_f, double rel_tol = 1e-9,
                                   long max_evals = 400000);

} // namespace netsel
