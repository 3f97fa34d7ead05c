#include "netsel/balloon.hpp"

#include <cmath>
#include <limits>

#include "netsel/errors.hpp"

namespace netsel {
namespace {

void validate(const BalloonSpec& spec) {
  if (spec.d < 1 || spec.b < 1) throw config_error("balloon needs d >= 1 and b >= 1");
  if (spec.d == 1 && spec.b > 1)
    throw config_error("balloon with d = 1 and b > 1 would need parallel edges");
  if (!(spec.gamma > 0.0) || !(spec.nu > 0.0))
    throw config_error("balloon needs positive gamma and nu");
}

// Tail of the truncated exponential series,
//   bracket = 1 - e^{-x} sum_{k=0}^{K} x^k/k! = e^{-x} sum_{k>K} x^k/k!,
// summed in the cancellation-free tail form with long double accumulation.
// The leading term is built in log space so large K or x cannot overflow.
long double truncated_exp_bracket(long double x, int K) {
  if (x <= 0.0L) return 0.0L;
  long double log_term = -x + (K + 1) * std::log(x) - std::lgamma(static_cast<long double>(K + 2));
  long double term = std::exp(log_term);
  long double sum = 0.0L;
  for (int k = K + 1; k < K + 2000000; ++k) {
    sum += term;
    term *= x / (k + 1);
    if (k > x && term < sum * 1e-22L) break;
  }
  return sum;
}

long double central_binomial(int d) {
  long double c = 1.0L;
  for (int i = 1; i <= d; ++i) c *= static_cast<long double>(d + i) / i;
  return c;
}

} // namespace

Graph build_balloon(const BalloonSpec& spec) {
  validate(spec);
  const int d = spec.d, b = spec.b;
  const int n = 2 + b * (d - 1);
  const int terminal = n - 1;

  std::vector<Edge> edges;
  if (d == 1) {
    edges.emplace_back(0, terminal);
  } else {
    for (int c = 0; c < b; ++c) {
      const int first = 1 + c * (d - 1);
      edges.emplace_back(0, first);
      for (int i = 0; i < d - 2; ++i) edges.emplace_back(first + i, first + i + 1);
      edges.emplace_back(first + d - 2, terminal);
    }
  }
  return Graph(n, spec.gamma, spec.nu, std::move(edges));
}

int balloon_terminal(const BalloonSpec& spec) {
  validate(spec);
  return 1 + spec.b * (spec.d - 1);
}

OrbitPartition balloon_orbits(const BalloonSpec& spec) {
  validate(spec);
  const int d = spec.d, b = spec.b;
  OrbitPartition part;
  part.orbits.push_back({0});
  for (int depth = 1; depth <= d - 1; ++depth) {
    std::vector<int> orbit;
    for (int c = 0; c < b; ++c) orbit.push_back(1 + c * (d - 1) + (depth - 1));
    part.orbits.push_back(std::move(orbit));
  }
  part.orbits.push_back({balloon_terminal(spec)});
  return part;
}

Eigen::MatrixXd OrbitPartition::indicator(int n) const {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, orbit_count());
  for (int k = 0; k < orbit_count(); ++k)
    for (int v : orbits[k]) E(v, k) = 1.0;
  return E;
}

bool is_symmetry(const Graph& g, const std::vector<int>& perm) {
  const int n = g.n();
  if (static_cast<int>(perm.size()) != n)
    throw config_error("permutation size mismatch");
  std::vector<char> seen(n, 0);
  for (int image : perm) {
    if (image < 0 || image >= n || seen[image])
      throw config_error("permutation is not a bijection on the nodes");
    seen[image] = 1;
  }
  for (const auto& [a, bnode] : g.edges())
    if (!g.has_edge(perm[a], perm[bnode])) return false;
  return true;
}

Eigen::MatrixXd quotient_adjacency(const Graph& g, const OrbitPartition& part) {
  const int n = g.n();
  const int q = part.orbit_count();
  std::vector<int> orbit_of(n, -1);
  for (int k = 0; k < q; ++k) {
    for (int v : part.orbits[k]) {
      if (v < 0 || v >= n || orbit_of[v] != -1)
        throw config_error("orbit partition must cover each node exactly once");
      orbit_of[v] = k;
    }
  }
  for (int v = 0; v < n; ++v)
    if (orbit_of[v] == -1) throw config_error("orbit partition misses node " + std::to_string(v));

  Eigen::MatrixXd AQ = Eigen::MatrixXd::Zero(q, q);
  AQ.diagonal().setConstant(-g.nu());
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < q; ++k) {
      int expected = -1;
      for (int u : part.orbits[j]) {
        int count = 0;
        for (int w : g.in_neighbors(u))
          if (orbit_of[w] == k) ++count;
        if (expected == -1) expected = count;
        else if (count != expected)
          throw config_error("orbit partition is not equitable");
      }
      AQ(j, k) += g.gamma() * expected;
    }
  }
  return AQ;
}

double balloon_Wdd(const BalloonSpec& spec, double t) {
  validate(spec);
  if (!(t >= 0.0)) throw config_error("balloon_Wdd needs t >= 0");
  const int d = spec.d;
  const long double two_nu = 2.0L * spec.nu;
  long double prefactor = (static_cast<long double>(spec.b) * spec.b / two_nu) *
                          std::pow(static_cast<long double>(spec.gamma) / two_nu, 2 * d) *
                          central_binomial(d);
  long double bracket =
      std::isinf(t) ? 1.0L : truncated_exp_bracket(two_nu * static_cast<long double>(t), 2 * d);
  return static_cast<double>(prefactor * bracket);
}

double balloon_Jstar(const BalloonSpec& spec, double beta, double t) {
  if (!(t > 0.0)) throw config_error("balloon_Jstar needs t > 0");
  if (beta == 0.0) return 0.0;
  return beta * beta / (2.0 * balloon_Wdd(spec, t));
}

} // namespace netsel
