#include <doctest.h>

#include <cmath>
#include <random>

#include "netsel/errors.hpp"
#include "netsel/generators.hpp"
#include "netsel/gramian.hpp"
#include "netsel/graph.hpp"
#include "netsel/lyapunov.hpp"

using namespace netsel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd random_hurwitz(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  // shift the spectrum left of the imaginary axis
  A -= (spectral_abscissa(A) + 0.5) * Eigen::MatrixXd::Identity(n, n);
  return A;
}

Eigen::MatrixXd random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
  return G * G.transpose();
}

} // namespace

TEST_CASE("algebraic lyapunov solve: decoupled scalar case") {
  Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd W = lyapunov_infinite(A, Eigen::MatrixXd::Identity(2, 2));
  CHECK(W.isApprox(0.5 * Eigen::MatrixXd::Identity(2, 2), 1e-12));
}

TEST_CASE("algebraic lyapunov solve: hand back-substitution") {
  Eigen::MatrixXd A(2, 2);
  A << -1, 0, 1, -1;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2, 2);
  Q(0, 0) = 1.0;
  Eigen::MatrixXd W = lyapunov_infinite(A, Q);
  Eigen::MatrixXd expect(2, 2);
  expect << 0.5, 0.25, 0.25, 0.25;
  CHECK(W.isApprox(expect, 1e-12));
}

TEST_CASE("lyapunov residual stays below tolerance on random stable systems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 24);
    Eigen::MatrixXd A = random_hurwitz(n, rng);
    Eigen::MatrixXd Q = random_psd(n, rng);
    Eigen::MatrixXd W = lyapunov_infinite(A, Q);
    const double residual = (A * W + W * A.transpose() + Q).norm();
    CHECK(residual <= 1e-10 * Q.norm());
  }
}

TEST_CASE("non-hurwitz matrices are refused with a diagnostic") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_WITH_AS(lyapunov_infinite(A, A), doctest::Contains("abscissa"),
                       numerical_error);
}

TEST_CASE("finite-horizon gramian approaches the algebraic solution") {
  std::mt19937_64 rng(7);
  Eigen::MatrixXd A = random_hurwitz(6, rng);
  Eigen::MatrixXd Q = random_psd(6, rng);
  Eigen::MatrixXd Winf = lyapunov_infinite(A, Q);
  Eigen::MatrixXd Wbig = gramian_finite(A, Q, 200.0);
  CHECK((Wbig - Winf).norm() <= 1e-8 * Winf.norm());
  CHECK(gramian_finite(A, Q, 0.0).isZero());
}

TEST_CASE("scalar finite-horizon gramian closed form") {
  const double nu = 0.7, tf = 1.3;
  Eigen::MatrixXd A(1, 1), Q(1, 1);
  A << -nu;
  Q << 1.0;
  const double expect = (1.0 - std::exp(-2.0 * nu * tf)) / (2.0 * nu);
  CHECK(gramian_finite(A, Q, tf)(0, 0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(gramian_quadrature(A, Q, tf)(0, 0) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("identity route and quadrature agree on random hurwitz systems") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    Eigen::MatrixXd A = random_hurwitz(n, rng);
    Eigen::MatrixXd Q = random_psd(n, rng);
    for (double tf : {0.5, 1.0, 5.0}) {
      Eigen::MatrixXd W1 = gramian_finite(A, Q, tf);
      Eigen::MatrixXd W2 = gramian_quadrature(A, Q, tf);
      CHECK((W1 - W2).norm() <= 1e-6 * W1.norm());
    }
  }
}

TEST_CASE("quadrature handles non-hurwitz dynamics") {
  Eigen::MatrixXd A(2, 2);
  A << 0.3, 0, 1, 0.1; // unstable
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd W = gramian_finite(A, Q, 1.0); // falls back to quadrature
  // scalar check on the (0,0) entry: int_0^1 e^{0.6 t} dt
  const double expect = (std::exp(0.6) - 1.0) / 0.6;
  CHECK(W(0, 0) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("driver contributions are additive") {
  GenParams params;
  params.k_av = 3.0;
  Graph g = gen_graph(GraphFamily::erdos_renyi, 12, params, true, 3);
  NodeSet targets({0, 4, 7}, 12);
  NodeSet drivers({1, 5, 9}, 12);

  for (double tf : {1.5, kInf}) {
    GramianSet gs = driver_contributions(g, targets, drivers, tf);
    Eigen::MatrixXd direct =
        GramianContext(g, targets, tf).output_gramian(drivers);
    CHECK((gs.output_gramian(drivers) - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
  }
}

TEST_CASE("single-candidate contribution is a single lyapunov solve") {
  Graph g(3, 1.0, 1.0, {{0, 1}, {1, 2}});
  NodeSet targets({2}, 3);
  GramianSet gs = driver_contributions(g, targets, NodeSet({0}, 3), kInf);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(3, 3);
  Q(0, 0) = 1.0;
  Eigen::MatrixXd W = lyapunov_infinite(state_matrix(g), Q);
  CHECK(gs.contribution(0)(0, 0) == doctest::Approx(W(2, 2)).epsilon(1e-12));
}

TEST_CASE("log det and numerical rank") {
  CHECK(log_det_psd(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(0.0));
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);

  Eigen::MatrixXd tiny = Eigen::MatrixXd::Zero(2, 2);
  tiny(0, 0) = 1.0;
  tiny(1, 1) = 1e-30;
  CHECK(numerical_rank(tiny, 1e-12) == 1);
  CHECK(log_det_psd(tiny, 1e-12) == -kInf);

  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
  CHECK(log_det_psd(Eigen::MatrixXd::Zero(3, 3)) == -kInf);

  // construction oracle: logdet(L L^T) = 2 sum log L_ii
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.5, 2.0);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < i; ++j) L(i, j) = unit(rng) - 1.25;
    L(i, i) = unit(rng);
  }
  double expect = 0.0;
  for (int i = 0; i < 5; ++i) expect += 2.0 * std::log(L(i, i));
  CHECK(log_det_psd(L * L.transpose()) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("vol cost: scalar case and monotonicity") {
  Graph g(3, 1.0, 1.0, {{0, 1}, {1, 2}});
  NodeSet targets({2}, 3);
  GramianSet gs = driver_contributions(g, targets, NodeSet({0, 1, 2}, 3), kInf);
  const double w_scalar = gs.contribution(2)(0, 0);
  CHECK(vol_cost(gs, NodeSet({2}, 3)) == doctest::Approx(-std::log(w_scalar)));

  // adding drivers never increases the cost
  CHECK(vol_cost(gs, NodeSet({0, 2}, 3)) <= vol_cost(gs, NodeSet({2}, 3)) + 1e-12);
  CHECK(vol_cost(gs, NodeSet({0, 1, 2}, 3)) <= vol_cost(gs, NodeSet({0, 2}, 3)) + 1e-12);
}

TEST_CASE("vol cost matches independent direct assembly on all driver pairs") {
  GenParams params;
  params.k_av = 2.5;
  Graph g = gen_graph(GraphFamily::erdos_renyi, 6, params, true, 15);
  NodeSet targets({1, 3}, 6);
  GramianSet gs = driver_contributions(g, targets, NodeSet({0, 1, 2, 3, 4, 5}, 6), kInf);
  Eigen::MatrixXd A = state_matrix(g);
  Eigen::MatrixXd C = output_matrix(6, targets);
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      NodeSet pair({a, b}, 6);
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(6, 6);
      Q(a, a) = Q(b, b) = 1.0;
      Eigen::MatrixXd Wbar = C * lyapunov_infinite(A, Q) * C.transpose();
      const double direct = -std::log(Wbar.determinant());
      CHECK(vol_cost(gs, pair) == doctest::Approx(direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("expected energy: scalar closed form") {
  // single node, nu = 0.5, tf = 1, driver = target
  Graph g(1, 1.0, 0.5, {});
  NodeSet only({0}, 1);
  GramianSet gs = driver_contributions(g, only, only, 1.0);
  const double expect = std::exp(-1.0) / (1.0 - std::exp(-1.0));
  CHECK(expected_energy(gs, only, state_matrix(g)) ==
        doctest::Approx(expect).epsilon(1e-10));
  CHECK(expected_energy(gs, only, state_matrix(g)) == doctest::Approx(0.5820).epsilon(1e-3));
}

TEST_CASE("expected energy vanishes at infinite horizon") {
  Graph g(2, 1.0, 1.0, {{0, 1}});
  NodeSet targets({1}, 2);
  GramianSet gs = driver_contributions(g, targets, NodeSet({0, 1}, 2), kInf);
  CHECK(expected_energy(gs, NodeSet({0}, 2), state_matrix(g)) == 0.0);
}

TEST_CASE("expected energy equals the dense-inverse recomputation") {
  GenParams params;
  params.k_av = 3.0;
  Graph g = gen_graph(GraphFamily::erdos_renyi, 8, params, true, 29);
  NodeSet targets({0, 2, 5}, 8);
  NodeSet drivers({1, 4, 6, 7}, 8);
  const double tf = 2.0;
  GramianSet gs = driver_contributions(g, targets, drivers, tf);
  Eigen::MatrixXd A = state_matrix(g);
  Eigen::MatrixXd C = output_matrix(8, targets);

  Eigen::MatrixXd Wbar = gs.output_gramian(drivers);
  Eigen::MatrixXd E = matrix_exponential(A * tf);
  Eigen::MatrixXd Xf = E * E.transpose();
  const double dense = (C.transpose() * Wbar.inverse() * C * Xf).trace();
  CHECK(expected_energy(gs, drivers, A) == doctest::Approx(dense).epsilon(1e-10));
}

TEST_CASE("expected energy of a singular output gramian is +inf with rank report") {
  // driver cannot reach the second target (reversed edge), so the output
  // gramian is singular
  Graph g(3, 1.0, 1.0, {{0, 1}, {2, 1}});
  NodeSet targets({1, 2}, 3);
  GramianSet gs = driver_contributions(g, targets, NodeSet({0}, 3), 1.0);
  int rank = -1;
  CHECK(std::isinf(expected_energy(gs, NodeSet({0}, 3), state_matrix(g), &rank)));
  CHECK(rank == 1);
}

TEST_CASE("optimal energy quadratic form") {
  Graph g(2, 1.0, 1.0, {{0, 1}});
  NodeSet targets({1}, 2);
  NodeSet drivers({0}, 2);
  GramianSet gs = driver_contributions(g, targets, drivers, kInf);
  Eigen::MatrixXd A = state_matrix(g);

  Maneuver mv;
  mv.x0 = Eigen::VectorXd::Zero(2);
  mv.yf = Eigen::VectorXd::Zero(1);
  CHECK(optimal_energy(gs, drivers, mv, A) == doctest::Approx(0.0));

  // d=1, b=1 balloon at infinite horizon: W_dd = 1/4, J* = 2 for beta = 1
  mv.yf(0) = 1.0;
  CHECK(optimal_energy(gs, drivers, mv, A) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("optimal energy along an eigenvector of the output gramian") {
  GenParams params;
  params.k_av = 3.0;
  Graph g = gen_graph(GraphFamily::erdos_renyi, 7, params, true, 47);
  NodeSet targets({1, 2, 4}, 7);
  NodeSet drivers({0, 3, 5, 6}, 7);
  GramianSet gs = driver_contributions(g, targets, drivers, kInf);
  Eigen::MatrixXd Wbar = gs.output_gramian(drivers);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Wbar);
  REQUIRE(es.eigenvalues().minCoeff() > 0);

  Maneuver mv;
  mv.x0 = Eigen::VectorXd::Zero(7);
  mv.yf = es.eigenvectors().col(1);
  const double lambda = es.eigenvalues()(1);
  CHECK(optimal_energy(gs, drivers, mv, state_matrix(g)) ==
        doctest::Approx(mv.yf.squaredNorm() / (2.0 * lambda)).epsilon(1e-9));
}

TEST_CASE("loewner monotonicity: adding a driver never shrinks eigenvalues") {
  GenParams params;
  params.k_av = 3.0;
  Graph g = gen_graph(GraphFamily::erdos_renyi, 9, params, true, 51);
  NodeSet targets({0, 3, 6}, 9);
  std::vector<int> all(9);
  for (int j = 0; j < 9; ++j) all[j] = j;
  GramianSet gs = driver_contributions(g, targets, NodeSet(all, 9), 1.0);

  NodeSet small({1, 4}, 9);
  NodeSet large({1, 4, 7}, 9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_small(gs.output_gramian(small));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_large(gs.output_gramian(large));
  for (int i = 0; i < 3; ++i)
    CHECK(es_large.eigenvalues()(i) >= es_small.eigenvalues()(i) - 1e-14);
}
