#include "netsel/gramian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "netsel/errors.hpp"

namespace netsel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double default_rel_tol(double rel_tol, Eigen::Index p) {
  return rel_tol >= 0.0 ? rel_tol
                        : static_cast<double>(p) * std::numeric_limits<double>::epsilon();
}
} // namespace

const Eigen::MatrixXd& GramianSet::contribution(int node) const {
  auto it = contributions.find(node);
  if (it == contributions.end())
    throw config_error("no Gramian contribution stored for node " + std::to_string(node));
  return it->second;
}

Eigen::MatrixXd GramianSet::output_gramian(const NodeSet& drivers) const {
  const int p = targets.size();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(p, p);
  for (int k : drivers.indices()) W += contribution(k);
  return W;
}

Eigen::VectorXd Maneuver::beta(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                               double t_f) const {
  if (std::isinf(t_f)) return yf; // free response of a stable system decays away
  return yf - C * (matrix_exponential(A * t_f) * x0);
}

GramianContext::GramianContext(const Graph& g, const NodeSet& targets, double t_f)
    : GramianContext(state_matrix(g), targets, t_f, g.n()) {}

GramianContext::GramianContext(Eigen::MatrixXd A, const NodeSet& targets, double t_f,
                               int n)
    : A_(std::move(A)),
      targets_(targets),
      horizon_(t_f),
      C_(output_matrix(n, targets)),
      solver_(A_) {
  if (targets_.empty()) throw config_error("target set must be nonempty");
  if (!(t_f > 0.0)) throw config_error("horizon t_f must be positive");
  if (!std::isinf(t_f)) exp_Atf_ = matrix_exponential(A_ * t_f);
  if (std::isinf(t_f) && !solver_.hurwitz())
    throw numerical_error("infinite horizon requires a Hurwitz state matrix");
}

const Eigen::MatrixXd& GramianContext::exp_Atf() const {
  if (!exp_Atf_) throw config_error("exp_Atf unavailable for infinite horizon");
  return *exp_Atf_;
}

Eigen::MatrixXd GramianContext::full_gramian(const Eigen::MatrixXd& Q) const {
  if (std::isinf(horizon_)) return solver_.solve(Q);
  if (solver_.hurwitz()) {
    Eigen::MatrixXd Winf = solver_.solve(Q);
    Eigen::MatrixXd W = Winf - exp_Atf() * Winf * exp_Atf().transpose();
    return 0.5 * (W + W.transpose());
  }
  return gramian_quadrature(A_, Q, horizon_);
}

Eigen::MatrixXd GramianContext::output_gramian(const NodeSet& drivers) const {
  const int n = static_cast<int>(A_.rows());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int k : drivers.indices()) Q(k, k) = 1.0;
  Eigen::MatrixXd W = full_gramian(Q);
  Eigen::MatrixXd Wbar = C_ * W * C_.transpose();
  return 0.5 * (Wbar + Wbar.transpose());
}

GramianSet driver_contributions(const GramianContext& ctx, const NodeSet& candidates) {
  if (candidates.empty()) throw config_error("driver_contributions: no candidates");
  const int n = static_cast<int>(ctx.A().rows());
  const bool finite = !std::isinf(ctx.horizon());

  GramianSet gs;
  gs.horizon = ctx.horizon();
  gs.targets = ctx.targets();

  // At output resolution C W_k C^T = C Winf C^T - (C e^{A tf}) Winf (C e^{A tf})^T;
  // the quadrature fallback only triggers for non-Hurwitz A.
  Eigen::MatrixXd G;
  const bool identity_route = !finite || ctx.solver().hurwitz();
  if (finite && identity_route) G = ctx.C() * ctx.exp_Atf();

  for (int k : candidates.indices()) {
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    Q(k, k) = 1.0;
    Eigen::MatrixXd Wbar;
    if (identity_route) {
      Eigen::MatrixXd Winf = ctx.solver().solve(Q);
      Wbar = ctx.C() * Winf * ctx.C().transpose();
      if (finite) Wbar -= G * Winf * G.transpose();
    } else {
      Eigen::MatrixXd W = gramian_quadrature(ctx.A(), Q, ctx.horizon());
      Wbar = ctx.C() * W * ctx.C().transpose();
    }
    gs.contributions[k] = 0.5 * (Wbar + Wbar.transpose());
  }
  return gs;
}

GramianSet driver_contributions(const Graph& g, const NodeSet& targets,
                                const NodeSet& candidates, double t_f) {
  GramianContext ctx(g, targets, t_f);
  return driver_contributions(ctx, candidates);
}

int numerical_rank(const Eigen::MatrixXd& Wbar, double rel_tol) {
  Eigen::MatrixXd S = 0.5 * (Wbar + Wbar.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("eigenvalue computation failed in numerical_rank");
  const auto& lam = es.eigenvalues();
  const double lam_max = lam.maxCoeff();
  if (lam_max <= 0.0) return 0;
  const double floor = default_rel_tol(rel_tol, S.rows()) * lam_max;
  int rank = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > floor) ++rank;
  return rank;
}

double log_det_psd(const Eigen::MatrixXd& Wbar, double rel_tol) {
  Eigen::MatrixXd S = 0.5 * (Wbar + Wbar.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() == Eigen::Success) {
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < S.rows(); ++i)
      logdet += std::log(llt.matrixLLT()(i, i));
    return 2.0 * logdet;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("eigenvalue computation failed in log_det_psd");
  const auto& lam = es.eigenvalues();
  const double lam_max = lam.maxCoeff();
  if (lam_max <= 0.0) return -kInf;
  const double floor = default_rel_tol(rel_tol, S.rows()) * lam_max;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) <= floor) return -kInf; // rank deficient
    logdet += std::log(lam(i));
  }
  return logdet;
}

double vol_cost_of_output(const Eigen::MatrixXd& Wbar) { return -log_det_psd(Wbar); }

double vol_cost(const GramianSet& gs, const NodeSet& drivers) {
  return vol_cost_of_output(gs.output_gramian(drivers));
}

double expected_energy_of_output(const Eigen::MatrixXd& Wbar, const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& C, double t_f, int* rank_out) {
  if (std::isinf(t_f)) return 0.0; // X_f vanishes for a stable system
  Eigen::MatrixXd S = 0.5 * (Wbar + Wbar.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    if (rank_out) *rank_out = numerical_rank(S);
    return kInf;
  }
  if (rank_out) *rank_out = static_cast<int>(S.rows());
  Eigen::MatrixXd CE = C * matrix_exponential(A * t_f); // p x n
  Eigen::MatrixXd M = CE * CE.transpose();              // C X_f C^T
  return llt.solve(M).trace();
}

double expected_energy(const GramianSet& gs, const NodeSet& drivers,
                       const Eigen::MatrixXd& A, int* rank_out) {
  const Eigen::MatrixXd C = output_matrix(static_cast<int>(A.rows()), gs.targets);
  return expected_energy_of_output(gs.output_gramian(drivers), A, C, gs.horizon,
                                   rank_out);
}

double optimal_energy(const GramianSet& gs, const NodeSet& drivers, const Maneuver& mv,
                      const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd C = output_matrix(static_cast<int>(A.rows()), gs.targets);
  const Eigen::VectorXd beta = mv.beta(A, C, gs.horizon);
  Eigen::MatrixXd Wbar = gs.output_gramian(drivers);
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (Wbar + Wbar.transpose()));
  if (llt.info() != Eigen::Success)
    throw numerical_error("optimal_energy: output Gramian is not positive definite");
  return 0.5 * beta.dot(llt.solve(beta));
}

} // namespace netsel
