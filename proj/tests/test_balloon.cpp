#include <doctest.h>

#include <cmath>

#include "netsel/balloon.hpp"
#include "netsel/errors.hpp"
#include "netsel/gramian.hpp"
#include "netsel/lyapunov.hpp"

using namespace netsel;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("balloon construction counts") {
  Graph g = build_balloon({2, 3, 1.0, 1.0});
  CHECK(g.n() == 5);
  CHECK(g.edge_count() == 6);

  Graph h = build_balloon({1, 1, 1.0, 1.0});
  CHECK(h.n() == 2);
  CHECK(h.edge_count() == 1);

  CHECK_THROWS_AS(build_balloon({0, 1, 1.0, 1.0}), config_error);
  CHECK_THROWS_AS(build_balloon({1, 2, 1.0, 1.0}), config_error); // parallel edges
}

TEST_CASE("balloon orbits partition the nodes by depth") {
  BalloonSpec spec{3, 2, 1.0, 1.0};
  OrbitPartition part = balloon_orbits(spec);
  CHECK(part.orbit_count() == 4); // v0, depth 1, depth 2, v_d
  CHECK(part.orbits[0] == std::vector<int>{0});
  CHECK(part.orbits[1].size() == 2);
  CHECK(part.orbits[2].size() == 2);
  CHECK(part.orbits[3] == std::vector<int>{balloon_terminal(spec)});

  Eigen::MatrixXd E = part.indicator(build_balloon(spec).n());
  CHECK(E.colwise().sum()(1) == doctest::Approx(2.0));
}

TEST_CASE("symmetry check: identity, chain swap, and a non-symmetry") {
  BalloonSpec spec{2, 2, 1.0, 1.0};
  Graph g = build_balloon(spec); // nodes: 0, chains {1}, {2}, terminal 3
  std::vector<int> identity{0, 1, 2, 3};
  CHECK(is_symmetry(g, identity));
  std::vector<int> swap_chains{0, 2, 1, 3};
  CHECK(is_symmetry(g, swap_chains));
  std::vector<int> move_driver{1, 0, 2, 3};
  CHECK(!is_symmetry(g, move_driver));
  CHECK_THROWS_AS(is_symmetry(g, std::vector<int>{0, 0, 1, 2}), config_error);
}

TEST_CASE("quotient of the trivial partition is the state matrix") {
  Graph g = build_balloon({3, 2, 1.0, 2.0});
  OrbitPartition trivial;
  for (int v = 0; v < g.n(); ++v) trivial.orbits.push_back({v});
  CHECK(quotient_adjacency(g, trivial).isApprox(state_matrix(g), 1e-14));
}

TEST_CASE("balloon quotient is the path with final edge weight b gamma") {
  BalloonSpec spec{3, 2, 0.5, 2.0};
  Graph g = build_balloon(spec);
  Eigen::MatrixXd AQ = quotient_adjacency(g, balloon_orbits(spec));
  REQUIRE(AQ.rows() == 4);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
  expect.diagonal().setConstant(-2.0);
  expect(1, 0) = 0.5;
  expect(2, 1) = 0.5;
  expect(3, 2) = 2.0 * 0.5; // b gamma
  CHECK(AQ.isApprox(expect, 1e-14));
}

TEST_CASE("non-equitable partition is rejected") {
  // star graph: center 0 feeding 3 leaves; lumping the center with a leaf
  // cannot be equitable
  Graph star(4, 1.0, 1.0, {{0, 1}, {0, 2}, {0, 3}});
  OrbitPartition bad;
  bad.orbits = {{0, 1}, {2, 3}};
  CHECK_THROWS_AS(quotient_adjacency(star, bad), config_error);
}

TEST_CASE("closed-form W_dd frozen values") {
  CHECK(balloon_Wdd({1, 1, 1.0, 1.0}, kInf) == doctest::Approx(0.25).epsilon(1e-15));
  // d=2, b=3: (9/2)(1/16) binom(4,2) = 27/16
  CHECK(balloon_Wdd({2, 3, 1.0, 1.0}, kInf) ==
        doctest::Approx(27.0 / 16.0).epsilon(1e-15));
  CHECK(balloon_Wdd({4, 2, 1.0, 1.0}, 0.0) == 0.0);
}

TEST_CASE("W_dd monotonicity in t, b, and d") {
  for (double t : {0.5, 1.0, 2.0, 4.0})
    CHECK(balloon_Wdd({3, 2, 1.0, 1.0}, 2.0 * t) > balloon_Wdd({3, 2, 1.0, 1.0}, t));
  for (int b = 1; b < 5; ++b)
    CHECK(balloon_Wdd({3, b + 1, 1.0, 1.0}, kInf) > balloon_Wdd({3, b, 1.0, 1.0}, kInf));
  for (int d = 2; d < 6; ++d) // gamma / (2nu) < 1
    CHECK(balloon_Wdd({d + 1, 2, 1.0, 1.0}, kInf) < balloon_Wdd({d, 2, 1.0, 1.0}, kInf));
}

TEST_CASE("J* frozen values and monotonicity in t") {
  CHECK(balloon_Jstar({1, 1, 1.0, 1.0}, 1.0, kInf) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(balloon_Jstar({3, 2, 1.0, 1.0}, 0.0, 5.0) == 0.0);
  double prev = balloon_Jstar({2, 2, 1.0, 1.0}, 1.0, 1.0);
  for (double t : {2.0, 4.0}) {
    const double cur = balloon_Jstar({2, 2, 1.0, 1.0}, 1.0, t);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("closed form equals the numeric gramian of the full balloon") {
  for (int d : {1, 2, 3, 4}) {
    for (int b : {1, 2, 3}) {
      if (d == 1 && b > 1) continue;
      BalloonSpec spec{d, b, 1.0, 1.0};
      Graph g = build_balloon(spec);
      Eigen::MatrixXd A = state_matrix(g);
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(g.n(), g.n());
      Q(0, 0) = 1.0;
      const int vd = balloon_terminal(spec);
      for (double t : {1.0, 5.0, kInf}) {
        const double numeric = std::isinf(t) ? lyapunov_infinite(A, Q)(vd, vd)
                                             : gramian_finite(A, Q, t)(vd, vd);
        const double closed = balloon_Wdd(spec, t);
        CHECK(std::abs(numeric - closed) <= 1e-8 * std::abs(closed));
      }
    }
  }
}

TEST_CASE("quotient gramian reproduces W_dd") {
  BalloonSpec spec{4, 3, 1.0, 1.0};
  Graph g = build_balloon(spec);
  Eigen::MatrixXd AQ = quotient_adjacency(g, balloon_orbits(spec));
  const int q = static_cast<int>(AQ.rows());
  Eigen::MatrixXd BQ = Eigen::MatrixXd::Zero(q, q);
  BQ(0, 0) = 1.0; // input enters the driver orbit
  for (double t : {1.0, kInf}) {
    const double quotient = std::isinf(t) ? lyapunov_infinite(AQ, BQ)(q - 1, q - 1)
                                          : gramian_finite(AQ, BQ, t)(q - 1, q - 1);
    CHECK(quotient == doctest::Approx(balloon_Wdd(spec, t)).epsilon(1e-10));
  }
}

TEST_CASE("gramian entries are constant on orbit pairs") {
  BalloonSpec spec{3, 3, 1.0, 1.0};
  Graph g = build_balloon(spec);
  Eigen::MatrixXd A = state_matrix(g);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(g.n(), g.n());
  Q(0, 0) = 1.0;
  Eigen::MatrixXd W = lyapunov_infinite(A, Q);
  const double scale = W.cwiseAbs().maxCoeff();
  OrbitPartition part = balloon_orbits(spec);
  for (const auto& orbit_j : part.orbits) {
    for (const auto& orbit_k : part.orbits) {
      const double ref = W(orbit_j[0], orbit_k[0]);
      for (int j : orbit_j)
        for (int k : orbit_k) CHECK(std::abs(W(j, k) - ref) <= 1e-10 * scale);
    }
  }
}
