#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "netsel/balloon.hpp"
#include "netsel/errors.hpp"
#include "netsel/generators.hpp"
#include "netsel/structure.hpp"

using namespace netsel;

namespace {

// Oracle: nodes lying on shortest j -> k paths, by exhaustive depth-first
// enumeration of every path of the shortest length.
std::set<int> nodes_on_shortest_paths(const Graph& g, int j, int k, int d) {
  std::set<int> nodes;
  std::vector<int> path{j};
  std::vector<char> on_path(g.n(), 0);
  on_path[j] = 1;
  auto dfs = [&](auto&& self, int u, int depth) -> void {
    if (depth == d) {
      if (u == k)
        for (int v : path) nodes.insert(v);
      return;
    }
    for (int v : g.out_neighbors(u)) {
      if (on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      self(self, v, depth + 1);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  dfs(dfs, j, 0);
  return nodes;
}

Graph three_path() { return Graph(3, 1.0, 1.0, {{0, 1}, {1, 2}}); }

} // namespace

TEST_CASE("distances along a path, with unreachable pairs") {
  Graph g = three_path();
  Eigen::MatrixXi d = all_pairs_distance(g, NodeSet({2}, 3));
  CHECK(d(0, 0) == 2);
  CHECK(d(1, 0) == 1);
  CHECK(d(2, 0) == 0);
  // the path is directed, so nothing reaches v0 except itself
  Eigen::MatrixXi back = all_pairs_distance(g, NodeSet({0}, 3));
  CHECK(back(0, 0) == 0);
  CHECK(back(1, 0) == kUnreachable);
  CHECK(back(2, 0) == kUnreachable);
}

TEST_CASE("balloon distance and redundancy match the construction") {
  BalloonSpec spec{3, 2, 1.0, 1.0};
  Graph g = build_balloon(spec);
  const int vd = balloon_terminal(spec);
  auto from0 = bfs_from(g, 0);
  auto tod = bfs_to(g, vd);
  CHECK(from0[vd] == 3);
  Rational r = redundancy(g, 0, vd, from0, tod);
  CHECK(r.value() == doctest::Approx(2.0));
}

TEST_CASE("redundancy is 1 on a simple path and 2 on a double 2-hop") {
  Graph g = three_path();
  auto from0 = bfs_from(g, 0);
  auto to2 = bfs_to(g, 2);
  CHECK(redundancy(g, 0, 2, from0, to2).value() == doctest::Approx(1.0));
  CHECK(shortest_path_node_count(from0, to2, 2) == 3);

  // two disjoint 2-hop routes: |V| = 4, r = 2
  Graph h(4, 1.0, 1.0, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  auto hfrom = bfs_from(h, 0);
  auto hto = bfs_to(h, 3);
  CHECK(shortest_path_node_count(hfrom, hto, 2) == 4);
  CHECK(redundancy(h, 0, 3, hfrom, hto).value() == doctest::Approx(2.0));

  CHECK_THROWS_AS(redundancy(g, 0, 1, bfs_from(g, 0), bfs_to(g, 1)), config_error);
}

TEST_CASE("shortest-path node count equals exhaustive path enumeration") {
  GenParams params;
  params.k_av = 3.0;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u, 6u}) {
    Graph g = gen_graph(GraphFamily::erdos_renyi, 12, params, true, seed);
    for (int j = 0; j < g.n(); ++j) {
      auto from_j = bfs_from(g, j);
      for (int k = 0; k < g.n(); ++k) {
        const int d = from_j[k];
        if (d < 2 || d > 4) continue;
        auto to_k = bfs_to(g, k);
        CHECK(shortest_path_node_count(from_j, to_k, d) ==
              static_cast<int>(nodes_on_shortest_paths(g, j, k, d).size()));
      }
    }
  }
}

TEST_CASE("pairwise cost frozen values") {
  // d=2, r=3, gamma=nu=1: log((2/9) sqrt(2 pi))
  const double c2 = pairwise_cost(2, 3.0, 1.0, 1.0);
  CHECK(c2 == doctest::Approx(std::log((2.0 / 9.0) * std::sqrt(2.0 * std::numbers::pi))));
  CHECK(c2 == doctest::Approx(-0.5852).epsilon(1e-3));
  // d=0: log(2 nu)
  CHECK(pairwise_cost(0, 1.0, 1.0, 1.0) == doctest::Approx(std::log(2.0)));
  CHECK(pairwise_cost(0, 1.0, 1.0, 1.0) == doctest::Approx(0.6931).epsilon(1e-3));
  // d=1 uses r=1: log(2 sqrt(pi))
  const double c1 = pairwise_cost(1, 99.0, 1.0, 1.0);
  CHECK(c1 == doctest::Approx(std::log(2.0 * std::sqrt(std::numbers::pi))));
  CHECK(c1 == doctest::Approx(1.2655).epsilon(1e-3));
  CHECK(std::isinf(pairwise_cost(kUnreachable, 1.0, 1.0, 1.0)));
  CHECK_THROWS_AS(pairwise_cost(2, 1.0, -1.0, 1.0), config_error);
}

TEST_CASE("pairwise cost tracks the inverse balloon Gramian up to Stirling error") {
  // (d=2, b=3) balloon: exact -log W_dd(inf) vs the Stirling-approximated cost
  BalloonSpec spec{2, 3, 1.0, 1.0};
  const double exact = std::log(1.0 / balloon_Wdd(spec, std::numeric_limits<double>::infinity()));
  const double stirling = pairwise_cost(2, 3.0, 1.0, 1.0);
  CHECK(std::abs(stirling - exact) < 0.07); // Stirling error of binom(4,2)
}

TEST_CASE("pairwise cost monotonicity") {
  for (int d = 2; d < 8; ++d) {
    CHECK(pairwise_cost(d + 1, 2.0, 1.0, 1.0) > pairwise_cost(d, 2.0, 1.0, 1.0));
    CHECK(pairwise_cost(d, 3.0, 1.0, 1.0) < pairwise_cost(d, 2.0, 1.0, 1.0));
  }
}

TEST_CASE("structure matrices agree with per-pair recomputation") {
  Graph g = three_path();
  NodeSet targets({0, 1, 2}, 3);
  StructureMatrices sm = structure_matrices(g, targets);
  for (int j = 0; j < 3; ++j) {
    auto from_j = bfs_from(g, j);
    for (int k = 0; k < 3; ++k) {
      CHECK(sm.dist(j, k) == from_j[targets[k]]);
      const int d = sm.dist(j, k);
      if (d >= 2) {
        auto to_k = bfs_to(g, targets[k]);
        Rational r = redundancy(g, j, targets[k], from_j, to_k);
        CHECK(sm.redundancy_at(j, k).num == r.num);
        CHECK(sm.redundancy_at(j, k).den == r.den);
        CHECK(sm.cost(j, k) ==
              doctest::Approx(pairwise_cost(d, r.value(), g.gamma(), g.nu())));
      } else if (d != kUnreachable) {
        CHECK(sm.cost(j, k) == doctest::Approx(pairwise_cost(d, 1.0, g.gamma(), g.nu())));
      } else {
        CHECK(std::isinf(sm.cost(j, k)));
      }
    }
  }
}

TEST_CASE("edgeless graph costs are finite only on the diagonal pairs") {
  Graph g(4, 1.0, 1.0, {});
  NodeSet targets({1, 3}, 4);
  StructureMatrices sm = structure_matrices(g, targets);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 2; ++k)
      CHECK(std::isfinite(sm.cost(j, k)) == (j == targets[k]));
}

TEST_CASE("balloon structure column reproduces the (d, b) values") {
  BalloonSpec spec{3, 2, 1.0, 1.0};
  Graph g = build_balloon(spec);
  const int vd = balloon_terminal(spec);
  StructureMatrices sm = structure_matrices(g, NodeSet({vd}, g.n()));
  CHECK(sm.dist(0, 0) == 3);
  CHECK(sm.redundancy_at(0, 0).value() == doctest::Approx(2.0));
  CHECK(sm.cost(0, 0) == doctest::Approx(pairwise_cost(3, 2.0, 1.0, 1.0)));
}

TEST_CASE("flp set cost examples and brute force") {
  Eigen::MatrixXd cost(2, 2);
  cost << 1, 5, 4, 2;
  CHECK(flp_set_cost(cost, {0}) == doctest::Approx(6.0));
  CHECK(flp_set_cost(cost, {0, 1}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(flp_set_cost(cost, {}), config_error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  Eigen::MatrixXd random_cost(10, 4);
  for (int j = 0; j < 10; ++j)
    for (int k = 0; k < 4; ++k) random_cost(j, k) = unit(rng);
  std::vector<int> drivers = {1, 4, 8};
  double brute = 0.0;
  for (int k = 0; k < 4; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int j : drivers) best = std::min(best, random_cost(j, k));
    brute += best;
  }
  CHECK(flp_set_cost(random_cost, drivers) == doctest::Approx(brute));
}

TEST_CASE("flp set cost is monotone under driver enlargement") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd cost(8, 5);
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 5; ++k) cost(j, k) = unit(rng);
    std::vector<int> small, large;
    for (int j = 0; j < 8; ++j) {
      const bool in_large = rng() % 2 == 0;
      if (in_large) large.push_back(j);
      if (in_large && rng() % 2 == 0) small.push_back(j);
    }
    if (small.empty() || large.empty()) continue;
    CHECK(flp_set_cost(cost, large) <= flp_set_cost(cost, small) + 1e-12);
  }
}

TEST_CASE("redundancy is invariant under node relabeling") {
  GenParams params;
  params.k_av = 3.0;
  Graph g = gen_graph(GraphFamily::erdos_renyi, 10, params, true, 13);
  std::mt19937_64 rng(17);
  std::vector<int> perm(g.n());
  for (int i = 0; i < g.n(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<Edge> relabeled;
  for (auto [a, b] : g.edges()) relabeled.emplace_back(perm[a], perm[b]);
  Graph h(g.n(), g.gamma(), g.nu(), relabeled);

  for (int j = 0; j < g.n(); ++j) {
    auto gfrom = bfs_from(g, j);
    auto hfrom = bfs_from(h, perm[j]);
    for (int k = 0; k < g.n(); ++k) {
      if (j == k || gfrom[k] < 2) continue;
      auto gto = bfs_to(g, k);
      auto hto = bfs_to(h, perm[k]);
      REQUIRE(hfrom[perm[k]] == gfrom[k]);
      Rational rg = redundancy(g, j, k, gfrom, gto);
      Rational rh = redundancy(h, perm[j], perm[k], hfrom, hto);
      CHECK(rg.num == rh.num);
      CHECK(rg.den == rh.den);
    }
  }
}
