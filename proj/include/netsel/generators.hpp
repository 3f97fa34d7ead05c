#pragma once

#include <cstdint>

#include "netsel/graph.hpp"

namespace netsel {

enum class GraphFamily { erdos_renyi, k_regular, watts_strogatz, power_law_config };

struct GenParams {
  double k_av = 6.0;   // mean degree (exact k for the k-regular family)
  double rewire = 0.05; // Watts-Strogatz rewiring probability
  double gamma = 1.0;
  double nu = 0.0; // <= 0 requests the Gershgorin default gamma * (k_max + 1)
};

GraphFamily parse_family(const std::string& name);
std::string family_name(GraphFamily family);

/// Generate a simple random graph of the requested family. Undirected
/// families store each edge as a symmetric pair of directed edges.
/// Deterministic for a fixed seed.
Graph gen_graph(GraphFamily family, int n, const GenParams& params, bool directed,
                std::uint64_t seed);

} // namespace netsel
