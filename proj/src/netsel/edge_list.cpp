#include "netsel/edge_list.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "netsel/errors.hpp"

namespace netsel {
namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw config_error(path + ":" + std::to_string(line) + ": " + what);
}

} // namespace

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) parse_fail(path, 1, "missing header line");
  ++lineno;

  std::istringstream hs(line);
  std::string kw_n, kw_gamma, kw_nu, kw_dir;
  int n = 0, directed = -1;
  double gamma = 0.0, nu = 0.0;
  hs >> kw_n >> n >> kw_gamma >> gamma >> kw_nu >> nu >> kw_dir >> directed;
  if (!hs || kw_n != "n" || kw_gamma != "gamma" || kw_nu != "nu" || kw_dir != "directed" ||
      (directed != 0 && directed != 1))
    parse_fail(path, lineno, "bad header, expected 'n <count> gamma <real> nu <real> directed <0|1>'");

  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream es(line);
    int a = -1, b = -1;
    std::string trailing;
    es >> a >> b;
    if (!es || (es >> trailing)) parse_fail(path, lineno, "expected 'j k'");
    edges.emplace_back(a, b);
    if (!directed) edges.emplace_back(b, a);
  }

  try {
    return Graph(n, gamma, nu, std::move(edges));
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  out.precision(17);

  const bool symmetric = g.is_edge_set_symmetric();
  out << "n " << g.n() << " gamma " << g.gamma() << " nu " << g.nu() << " directed "
      << (symmetric ? 0 : 1) << "\n";
  for (const auto& [a, b] : g.edges()) {
    if (symmetric && a > b) continue;
    out << a << " " << b << "\n";
  }
  if (!out) throw config_error("write failed for " + path);
}

} // namespace netsel
