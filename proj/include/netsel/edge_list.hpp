#pragma once

#include <string>

#include "netsel/graph.hpp"

namespace netsel {

/// Edge-list text format. Header line:
///   n <count> gamma <real> nu <real> directed <0|1>
/// followed by one "j k" pair per line (0-based). With directed 0 each
/// line names an undirected edge stored as the two directed edges.
Graph read_edge_list(const std::string& path);

void write_edge_list(const Graph& g, const std::string& path);

} // namespace netsel
