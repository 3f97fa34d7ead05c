#include "netsel/pmedian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netsel/errors.hpp"

namespace netsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_instance(const Eigen::MatrixXd& cost, int m) {
  const int n = static_cast<int>(cost.rows());
  const int p = static_cast<int>(cost.cols());
  if (m < 1 || m > n) throw config_error("p-median: need 1 <= m <= n");
  for (int k = 0; k < p; ++k) {
    bool reachable = false;
    for (int j = 0; j < n && !reachable; ++j) reachable = std::isfinite(cost(j, k));
    if (!reachable)
      throw config_error("p-median: target " + std::to_string(k) +
                         " unreachable from every candidate");
  }
}

struct BranchAndBound {
  const Eigen::MatrixXd& cost;
  const int n, p, m;
  std::vector<char> closed;
  std::vector<int> open;
  double incumbent_obj = kInf;
  std::vector<int> incumbent;
  long nodes = 0;

  BranchAndBound(const Eigen::MatrixXd& c, int m_)
      : cost(c),
        n(static_cast<int>(c.rows())),
        p(static_cast<int>(c.cols())),
        m(m_),
        closed(n, 0) {}

  void record_leaf(std::vector<int> candidate_set) {
    std::sort(candidate_set.begin(), candidate_set.end());
    const double obj = pmedian_objective(cost, candidate_set);
    if (obj < incumbent_obj) {
      incumbent_obj = obj;
      incumbent = std::move(candidate_set);
    }
  }

  void recurse() {
    ++nodes;
    const int opened = static_cast<int>(open.size());
    int undecided = 0;
    for (int j = 0; j < n; ++j)
      if (!closed[j] && !std::binary_search(open.begin(), open.end(), j)) ++undecided;
    // binary_search needs sorted `open`; we keep it sorted on insert below.

    if (opened == m) {
      record_leaf(open);
      return;
    }
    if (opened + undecided < m) return; // cannot reach cardinality m
    if (opened + undecided == m) {
      std::vector<int> all = open;
      for (int j = 0; j < n; ++j)
        if (!closed[j] && !std::binary_search(open.begin(), open.end(), j))
          all.push_back(j);
      record_leaf(std::move(all));
      return;
    }

    // a_k: best assignment through the forced-open set
    std::vector<double> a(p, kInf);
    for (int j : open)
      for (int k = 0; k < p; ++k) a[k] = std::min(a[k], cost(j, k));

    // column-minimum bound over open + undecided
    double lb1 = 0.0;
    for (int k = 0; k < p; ++k) {
      double best = a[k];
      for (int j = 0; j < n; ++j) {
        if (closed[j]) continue;
        best = std::min(best, cost(j, k));
      }
      lb1 += best;
    }

    // saving bound: opening a facility j can save at most
    // sum_k max(0, a_k - c_jk); at most (m - opened) facilities get opened
    double lb2 = -kInf;
    std::vector<double> saving;
    std::vector<std::pair<double, int>> choice; // (-saving, j) for branching
    if (opened > 0) {
      double base = std::accumulate(a.begin(), a.end(), 0.0);
      for (int j = 0; j < n; ++j) {
        if (closed[j] || std::binary_search(open.begin(), open.end(), j)) continue;
        double s = 0.0;
        for (int k = 0; k < p; ++k)
          if (cost(j, k) < a[k]) s += a[k] - (std::isinf(a[k]) ? 0.0 : cost(j, k));
        // an undecided facility may have to cover a still-infinite column;
        // treat that saving as infinite so lb2 stays a valid lower bound
        saving.push_back(s);
        choice.emplace_back(-s, j);
      }
      std::sort(saving.begin(), saving.end(), std::greater<>());
      double saved = 0.0;
      for (int i = 0; i < m - opened && i < static_cast<int>(saving.size()); ++i)
        saved += saving[i];
      if (std::isfinite(base)) lb2 = base - saved;
      else lb2 = lb1;
    } else {
      // root: branch on the cheapest row first
      for (int j = 0; j < n; ++j) {
        if (closed[j]) continue;
        double s = 0.0;
        for (int k = 0; k < p; ++k) s += std::min(cost(j, k), 1e18);
        choice.emplace_back(s, j);
      }
    }

    // the margin keeps the near-tie band open so floating-point summation
    // order can never prune a set whose canonical objective beats the
    // incumbent's
    const double margin = 1e-9 * (1.0 + std::abs(incumbent_obj));
    if (std::max(lb1, lb2) >= incumbent_obj + margin) return;

    // branch on the most promising undecided facility, open side first
    std::sort(choice.begin(), choice.end());
    const int pick = choice.front().second;

    open.insert(std::lower_bound(open.begin(), open.end(), pick), pick);
    recurse();
    open.erase(std::find(open.begin(), open.end(), pick));

    closed[pick] = 1;
    recurse();
    closed[pick] = 0;
  }
};

} // namespace

double pmedian_objective(const Eigen::MatrixXd& cost, const std::vector<int>& open) {
  if (open.empty()) throw config_error("p-median objective of an empty set");
  double total = 0.0;
  for (int k = 0; k < cost.cols(); ++k) {
    double best = kInf;
    for (int j : open) best = std::min(best, cost(j, k));
    total += best;
  }
  return total;
}

PMedianResult pmedian_local_search(const Eigen::MatrixXd& cost, int m) {
  validate_instance(cost, m);
  const int n = static_cast<int>(cost.rows());
  const int p = static_cast<int>(cost.cols());

  // greedy seed
  std::vector<char> in(n, 0);
  std::vector<double> best_assign(p, kInf);
  std::vector<int> open;
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    double pick_obj = kInf;
    for (int j = 0; j < n; ++j) {
      if (in[j]) continue;
      double obj = 0.0;
      for (int k = 0; k < p; ++k) obj += std::min(best_assign[k], cost(j, k));
      if (obj < pick_obj) {
        pick_obj = obj;
        pick = j;
      }
    }
    if (pick < 0) pick = static_cast<int>(std::find(in.begin(), in.end(), 0) - in.begin());
    in[pick] = 1;
    open.push_back(pick);
    for (int k = 0; k < p; ++k) best_assign[k] = std::min(best_assign[k], cost(pick, k));
  }
  std::sort(open.begin(), open.end());

  // best-improvement swaps until 1-swap optimal
  double cur = pmedian_objective(cost, open);
  for (;;) {
    // per-target best and second-best over the open set
    std::vector<double> b1(p, kInf), b2(p, kInf);
    std::vector<int> arg1(p, -1);
    for (int j : open) {
      for (int k = 0; k < p; ++k) {
        const double c = cost(j, k);
        if (c < b1[k]) {
          b2[k] = b1[k];
          b1[k] = c;
          arg1[k] = j;
        } else if (c < b2[k]) {
          b2[k] = c;
        }
      }
    }
    double best_obj = cur;
    int best_out = -1, best_in = -1;
    for (int a : open) {
      for (int b = 0; b < n; ++b) {
        if (in[b]) continue;
        double obj = 0.0;
        for (int k = 0; k < p; ++k) {
          const double keep = (arg1[k] == a) ? b2[k] : b1[k];
          obj += std::min(keep, cost(b, k));
        }
        if (obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
          best_obj = obj;
          best_out = a;
          best_in = b;
        }
      }
    }
    if (best_out < 0) break;
    in[best_out] = 0;
    in[best_in] = 1;
    open.erase(std::find(open.begin(), open.end(), best_out));
    open.insert(std::lower_bound(open.begin(), open.end(), best_in), best_in);
    cur = pmedian_objective(cost, open);
  }

  PMedianResult res;
  res.open = std::move(open);
  res.objective = cur;
  res.proven_optimal = false;
  return res;
}

PMedianResult pmedian_exact(const Eigen::MatrixXd& cost, int m) {
  validate_instance(cost, m);
  BranchAndBound bb(cost, m);

  PMedianResult seed = pmedian_local_search(cost, m);
  bb.incumbent = seed.open;
  bb.incumbent_obj = seed.objective;

  bb.recurse();

  PMedianResult res;
  res.open = std::move(bb.incumbent);
  res.objective = bb.incumbent_obj;
  res.proven_optimal = true;
  res.nodes_explored = bb.nodes;
  return res;
}

long long flp_constraint_nonzeros(int n, int p) {
  if (n < 1 || p < 0) throw config_error("flp_constraint_nonzeros: need n >= 1, p >= 0");
  // variables: Y_j -> j, Z_{j,k} -> n + j*p + k
  std::vector<std::pair<long long, long long>> entries;
  long long row = 0;
  for (int j = 0; j < n; ++j) entries.emplace_back(row, j); // sum_j Y_j = m
  ++row;
  for (int k = 0; k < p; ++k, ++row)                        // sum_j Z_{j,k} = 1
    for (int j = 0; j < n; ++j) entries.emplace_back(row, n + static_cast<long long>(j) * p + k);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < p; ++k, ++row) { // Z_{j,k} <= Y_j
      entries.emplace_back(row, n + static_cast<long long>(j) * p + k);
      entries.emplace_back(row, j);
    }
  }
  return static_cast<long long>(entries.size());
}

} // namespace netsel
