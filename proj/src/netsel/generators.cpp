#include "netsel/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netsel/errors.hpp"

namespace netsel {
namespace {

constexpr int kPairingAttempts = 100;

using Rng = std::mt19937_64;

int rand_below(Rng& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

template <typename T>
void fisher_yates(std::vector<T>& v, Rng& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
    std::swap(v[i], v[rand_below(rng, i + 1)]);
}

std::vector<Edge> symmetrize(const std::vector<std::pair<int, int>>& undirected) {
  std::vector<Edge> edges;
  edges.reserve(2 * undirected.size());
  for (auto [a, b] : undirected) {
    edges.emplace_back(a, b);
    edges.emplace_back(b, a);
  }
  return edges;
}

std::vector<std::pair<int, int>> er_undirected(int n, double p, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng) < p) edges.emplace_back(a, b);
  return edges;
}

std::vector<Edge> er_directed(int n, double p, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && coin(rng) < p) edges.emplace_back(a, b);
  return edges;
}

bool pairing_is_simple(const std::vector<std::pair<int, int>>& pairs, bool ordered) {
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : pairs) {
    if (a == b) return false;
    auto key = (!ordered && a > b) ? std::pair{b, a} : std::pair{a, b};
    if (!seen.insert(key).second) return false;
  }
  return true;
}

// Undirected configuration model: pair up stubs uniformly at random,
// resampling the whole pairing while it has loops or multi-edges; after the
// attempt budget, drop the offending pairs (degrees then only approximate).
std::vector<std::pair<int, int>> configuration_pairing(const std::vector<int>& degrees,
                                                       Rng& rng) {
  std::vector<int> stubs;
  for (int v = 0; v < static_cast<int>(degrees.size()); ++v)
    stubs.insert(stubs.end(), degrees[v], v);
  if (stubs.size() % 2 != 0)
    throw config_error("configuration model needs an even total degree");

  std::vector<std::pair<int, int>> pairs(stubs.size() / 2);
  for (int attempt = 0; attempt < kPairingAttempts; ++attempt) {
    fisher_yates(stubs, rng);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      pairs[i] = {stubs[2 * i], stubs[2 * i + 1]};
    if (pairing_is_simple(pairs, /*ordered=*/false)) return pairs;
  }
  std::set<std::pair<int, int>> kept;
  for (auto [a, b] : pairs) {
    if (a == b) continue;
    kept.insert(a < b ? std::pair{a, b} : std::pair{b, a});
  }
  return {kept.begin(), kept.end()};
}

std::vector<Edge> directed_configuration_pairing(const std::vector<int>& out_deg,
                                                 const std::vector<int>& in_deg,
                                                 Rng& rng) {
  std::vector<int> out_stubs, in_stubs;
  for (int v = 0; v < static_cast<int>(out_deg.size()); ++v)
    out_stubs.insert(out_stubs.end(), out_deg[v], v);
  for (int v = 0; v < static_cast<int>(in_deg.size()); ++v)
    in_stubs.insert(in_stubs.end(), in_deg[v], v);
  if (out_stubs.size() != in_stubs.size())
    throw config_error("directed configuration model stub counts differ");

  std::vector<std::pair<int, int>> pairs(out_stubs.size());
  for (int attempt = 0; attempt < kPairingAttempts; ++attempt) {
    fisher_yates(in_stubs, rng);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      pairs[i] = {out_stubs[i], in_stubs[i]};
    if (pairing_is_simple(pairs, /*ordered=*/true)) return pairs;
  }
  std::set<std::pair<int, int>> kept;
  for (auto [a, b] : pairs)
    if (a != b) kept.insert({a, b});
  return {kept.begin(), kept.end()};
}

std::vector<std::pair<int, int>> ws_undirected(int n, int k, double rewire, Rng& rng) {
  if (k % 2 != 0) throw config_error("watts_strogatz needs an even mean degree");
  if (k >= n) throw config_error("watts_strogatz needs k < n");
  std::set<std::pair<int, int>> edges;
  auto key = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  for (int v = 0; v < n; ++v)
    for (int off = 1; off <= k / 2; ++off) edges.insert(key(v, (v + off) % n));

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int v = 0; v < n; ++v) {
    for (int off = 1; off <= k / 2; ++off) {
      int w = (v + off) % n;
      if (coin(rng) >= rewire) continue;
      if (!edges.count(key(v, w))) continue; // already rewired away
      // draw a fresh endpoint, keeping the graph simple
      int fresh = -1;
      for (int tries = 0; tries < 2 * n; ++tries) {
        int cand = rand_below(rng, n);
        if (cand == v || edges.count(key(v, cand))) continue;
        fresh = cand;
        break;
      }
      if (fresh < 0) continue; // node saturated, keep the lattice edge
      edges.erase(key(v, w));
      edges.insert(key(v, fresh));
    }
  }
  return {edges.begin(), edges.end()};
}

// Discrete power-law degrees with exponent 3, drawn by inverse-CDF sampling
// of the continuous law and rounded. The minimum degree k_av/2 makes the
// continuous mean equal k_av.
std::vector<int> power_law_degrees(int n, double k_av, Rng& rng) {
  const double x_min = k_av / 2.0;
  if (x_min < 1.0) throw config_error("power_law_config needs k_av >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> degrees(n);
  for (int attempt = 0; attempt < kPairingAttempts; ++attempt) {
    long long total = 0;
    for (int v = 0; v < n; ++v) {
      double u = unit(rng);
      double x = x_min / std::sqrt(1.0 - u);
      int d = static_cast<int>(std::llround(x));
      d = std::clamp(d, 1, n - 1);
      degrees[v] = d;
      total += d;
    }
    if (total % 2 == 0) return degrees;
  }
  throw config_error("power_law_config: no even-sum degree sequence within budget");
}

} // namespace

GraphFamily parse_family(const std::string& name) {
  if (name == "erdos_renyi" || name == "er") return GraphFamily::erdos_renyi;
  if (name == "k_regular" || name == "kreg") return GraphFamily::k_regular;
  if (name == "watts_strogatz" || name == "ws") return GraphFamily::watts_strogatz;
  if (name == "power_law_config" || name == "pl") return GraphFamily::power_law_config;
  throw config_error("unknown graph family: " + name);
}

std::string family_name(GraphFamily family) {
  switch (family) {
    case GraphFamily::erdos_renyi: return "erdos_renyi";
    case GraphFamily::k_regular: return "k_regular";
    case GraphFamily::watts_strogatz: return "watts_strogatz";
    case GraphFamily::power_law_config: return "power_law_config";
  }
  return "?";
}

Graph gen_graph(GraphFamily family, int n, const GenParams& params, bool directed,
                std::uint64_t seed) {
  if (n < 2) throw config_error("gen_graph needs n >= 2");
  if (!(params.gamma > 0.0)) throw config_error("gamma must be positive");
  Rng rng(seed);

  std::vector<Edge> edges;
  switch (family) {
    case GraphFamily::erdos_renyi: {
      const double p = params.k_av / (n - 1);
      if (p < 0.0 || p > 1.0) throw config_error("erdos_renyi: k_av out of range");
      edges = directed ? er_directed(n, p, rng) : symmetrize(er_undirected(n, p, rng));
      break;
    }
    case GraphFamily::k_regular: {
      const int k = static_cast<int>(std::llround(params.k_av));
      if (k < 1 || k >= n) throw config_error("k_regular needs 1 <= k < n");
      if (directed) {
        std::vector<int> deg(n, k);
        edges = directed_configuration_pairing(deg, deg, rng);
      } else {
        if ((static_cast<long long>(n) * k) % 2 != 0)
          throw config_error("k_regular: n*k must be even");
        edges = symmetrize(configuration_pairing(std::vector<int>(n, k), rng));
      }
      break;
    }
    case GraphFamily::watts_strogatz: {
      const int k = static_cast<int>(std::llround(params.k_av));
      auto und = ws_undirected(n, k, params.rewire, rng);
      edges = symmetrize(und);
      break;
    }
    case GraphFamily::power_law_config: {
      auto degrees = power_law_degrees(n, params.k_av, rng);
      edges = symmetrize(configuration_pairing(degrees, rng));
      break;
    }
  }

  // Directed variants of the rewired/configuration families keep each
  // undirected edge as two directed edges; nothing further to do here
  // because symmetrize() already emitted both directions.
  double nu = params.nu;
  if (!(nu > 0.0)) {
    Graph probe(n, params.gamma, 1.0, edges);
    nu = params.gamma * (probe.max_in_degree() + 1);
  }
  return Graph(n, params.gamma, nu, std::move(edges));
}

} // namespace netsel
