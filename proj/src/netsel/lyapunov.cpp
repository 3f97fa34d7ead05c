#include "netsel/lyapunov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "netsel/errors.hpp"

namespace netsel {
namespace {

double schur_abscissa(const Eigen::MatrixXd& T) {
  const int n = static_cast<int>(T.rows());
  double worst = -std::numeric_limits<double>::infinity();
  int i = 0;
  while (i < n) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      // complex pair: real part is the mean of the 2x2 block diagonal
      worst = std::max(worst, 0.5 * (T(i, i) + T(i + 1, i + 1)));
      i += 2;
    } else {
      worst = std::max(worst, T(i, i));
      i += 1;
    }
  }
  return worst;
}

} // namespace

LyapunovSolver::LyapunovSolver(Eigen::MatrixXd A) {
  if (A.rows() != A.cols()) throw config_error("LyapunovSolver: A must be square");
  Eigen::RealSchur<Eigen::MatrixXd> schur(A);
  if (schur.info() != Eigen::Success)
    throw numerical_error("real Schur decomposition failed");
  U_ = schur.matrixU();
  T_ = schur.matrixT();
  abscissa_ = schur_abscissa(T_);

  const int n = static_cast<int>(T_.rows());
  int i = 0;
  while (i < n) {
    const int size = (i + 1 < n && T_(i + 1, i) != 0.0) ? 2 : 1;
    block_start_.push_back(i);
    block_size_.push_back(size);
    i += size;
  }
}

Eigen::MatrixXd LyapunovSolver::solve(const Eigen::MatrixXd& Q) const {
  const int n = this->n();
  if (Q.rows() != n || Q.cols() != n)
    throw config_error("LyapunovSolver: Q dimension mismatch");
  if (!hurwitz()) {
    std::ostringstream msg;
    msg << "algebraic Lyapunov equation needs Hurwitz A (spectral abscissa "
        << abscissa_ << ")";
    throw numerical_error(msg.str());
  }

  // Transform to Schur coordinates: T Y + Y T^T = -U^T Q U, then
  // back-substitute over the quasi-triangular blocks from the bottom right.
  Eigen::MatrixXd S = -(U_.transpose() * Q * U_);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, n);

  const int nb = static_cast<int>(block_start_.size());
  for (int jb = nb - 1; jb >= 0; --jb) {
    const int j0 = block_start_[jb], sj = block_size_[jb];
    const int jrest = j0 + sj; // first column past block jb
    for (int ib = nb - 1; ib >= 0; --ib) {
      const int i0 = block_start_[ib], si = block_size_[ib];
      const int irest = i0 + si;

      Eigen::MatrixXd rhs = S.block(i0, j0, si, sj);
      if (irest < n)
        rhs.noalias() -= T_.block(i0, irest, si, n - irest) * Y.block(irest, j0, n - irest, sj);
      if (jrest < n)
        rhs.noalias() -= Y.block(i0, jrest, si, n - jrest) *
                         T_.block(j0, jrest, sj, n - jrest).transpose();

      // Small Sylvester solve T_ii X + X T_jj^T = rhs via Kronecker lift.
      const int m = si * sj;
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4> M(m, m);
      M.setZero();
      const auto Tii = T_.block(i0, i0, si, si);
      const auto Tjj = T_.block(j0, j0, sj, sj);
      for (int c = 0; c < sj; ++c)
        M.block(c * si, c * si, si, si) = Tii;
      for (int c = 0; c < sj; ++c)
        for (int r = 0; r < sj; ++r)
          M.block(r * si, c * si, si, si).diagonal().array() += Tjj(r, c);

      Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> v(m);
      for (int c = 0; c < sj; ++c) v.segment(c * si, si) = rhs.col(c);
      v = M.partialPivLu().solve(v);
      for (int c = 0; c < sj; ++c) Y.block(i0, j0 + c, si, 1) = v.segment(c * si, si);
    }
  }

  Eigen::MatrixXd W = U_ * Y * U_.transpose();
  return 0.5 * (W + W.transpose());
}

Eigen::MatrixXd lyapunov_infinite(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  return LyapunovSolver(A).solve(Q);
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) {
  return A.exp();
}

namespace {

struct QuadratureState {
  const Eigen::MatrixXd& A;
  const Eigen::MatrixXd& Q;
  long evals = 0;
  long budget = 0;

  Eigen::MatrixXd integrand(double t) {
    if (++evals > budget) throw numerical_error("gramian quadrature budget exceeded");
    Eigen::MatrixXd E = (A * t).exp();
    return E * Q * E.transpose();
  }
};

Eigen::MatrixXd simpson(const Eigen::MatrixXd& fa, const Eigen::MatrixXd& fm,
                        const Eigen::MatrixXd& fb, double h) {
  return (h / 6.0) * (fa + 4.0 * fm + fb);
}

Eigen::MatrixXd adaptive(QuadratureState& st, double a, double b,
                         const Eigen::MatrixXd& fa, const Eigen::MatrixXd& fm,
                         const Eigen::MatrixXd& fb, const Eigen::MatrixXd& whole,
                         double tol, int depth) {
  const double m = 0.5 * (a + b);
  Eigen::MatrixXd flm = st.integrand(0.5 * (a + m));
  Eigen::MatrixXd frm = st.integrand(0.5 * (m + b));
  Eigen::MatrixXd left = simpson(fa, flm, fm, m - a);
  Eigen::MatrixXd right = simpson(fm, frm, fb, b - m);
  Eigen::MatrixXd delta = left + right - whole;
  if (depth > 0 && delta.norm() > 15.0 * tol) {
    return adaptive(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
  return left + right + delta / 15.0;
}

} // namespace

Eigen::MatrixXd gramian_quadrature(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                                   double t_f, double rel_tol, long max_evals) {
  if (!(t_f >= 0.0) || std::isinf(t_f))
    throw config_error("gramian_quadrature needs a finite t_f >= 0");
  const int n = static_cast<int>(A.rows());
  if (t_f == 0.0) return Eigen::MatrixXd::Zero(n, n);

  QuadratureState st{A, Q, 0, max_evals};
  // coarse composite pass to fix the absolute error scale
  constexpr int kCoarse = 8;
  std::vector<Eigen::MatrixXd> f;
  f.reserve(2 * kCoarse + 1);
  for (int i = 0; i <= 2 * kCoarse; ++i) f.push_back(st.integrand(t_f * i / (2.0 * kCoarse)));
  Eigen::MatrixXd coarse = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < kCoarse; ++i)
    coarse += simpson(f[2 * i], f[2 * i + 1], f[2 * i + 2], t_f / kCoarse);

  double scale = coarse.norm();
  if (scale == 0.0) scale = Q.norm() * t_f;
  if (scale == 0.0) return Eigen::MatrixXd::Zero(n, n);

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  const double tol_per_panel = rel_tol * scale / kCoarse;
  for (int i = 0; i < kCoarse; ++i) {
    const double a = t_f * (2 * i) / (2.0 * kCoarse);
    const double b = t_f * (2 * i + 2) / (2.0 * kCoarse);
    Eigen::MatrixXd whole = simpson(f[2 * i], f[2 * i + 1], f[2 * i + 2], b - a);
    total += adaptive(st, a, b, f[2 * i], f[2 * i + 1], f[2 * i + 2], whole,
                      tol_per_panel, /*depth=*/40);
  }
  return 0.5 * (total + total.transpose());
}

Eigen::MatrixXd gramian_finite(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                               double t_f) {
  const int n = static_cast<int>(A.rows());
  if (t_f == 0.0) return Eigen::MatrixXd::Zero(n, n);
  LyapunovSolver solver(A);
  if (std::isinf(t_f)) return solver.solve(Q);
  if (!(t_f > 0.0)) throw config_error("gramian_finite needs t_f > 0");
  if (solver.hurwitz()) {
    Eigen::MatrixXd Winf = solver.solve(Q);
    Eigen::MatrixXd E = (A * t_f).exp();
    Eigen::MatrixXd W = Winf - E * Winf * E.transpose();
    return 0.5 * (W + W.transpose());
  }
  return gramian_quadrature(A, Q, t_f);
}

} // namespace netsel
