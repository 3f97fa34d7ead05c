#include "netsel/selectors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "netsel/errors.hpp"
#include "netsel/pmedian.hpp"

namespace netsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

void validate_budget(const ProblemContext& ctx, int m) {
  if (m < 1 || m > ctx.n()) throw config_error("driver budget m must satisfy 1 <= m <= n");
}

} // namespace

ProblemContext::ProblemContext(const Graph& g, NodeSet targets, double t_f)
    : graph_(&g), targets_(std::move(targets)), t_f_(t_f) {
  if (targets_.empty()) throw config_error("target set must be nonempty");
}

const GramianContext& ProblemContext::gramian() const {
  if (!gramian_) gramian_ = std::make_unique<GramianContext>(*graph_, targets_, t_f_);
  return *gramian_;
}

const GramianSet& ProblemContext::contributions() const {
  if (!contributions_) {
    std::vector<int> all(graph_->n());
    for (int j = 0; j < graph_->n(); ++j) all[j] = j;
    contributions_ = std::make_unique<GramianSet>(
        driver_contributions(gramian(), NodeSet(all, graph_->n())));
  }
  return *contributions_;
}

const StructureMatrices& ProblemContext::structure() const {
  if (!structure_)
    structure_ = std::make_unique<StructureMatrices>(structure_matrices(*graph_, targets_));
  return *structure_;
}

void ProblemContext::fill_costs(SelectionResult& result) const {
  Eigen::MatrixXd Wbar = contributions_
                             ? contributions_->output_gramian(result.drivers)
                             : gramian().output_gramian(result.drivers);
  result.vol = vol_cost_of_output(Wbar);
  result.energy =
      expected_energy_of_output(Wbar, gramian().A(), gramian().C(), t_f_, nullptr);
  result.flp = flp_set_cost(structure(), result.drivers);
}

SelectionResult greedy_select(const ProblemContext& ctx, int m) {
  validate_budget(ctx, m);
  Stopwatch watch;
  const GramianSet& gs = ctx.contributions();
  const int n = ctx.n();
  const int p = ctx.p();

  std::vector<char> chosen(n, 0);
  std::vector<int> picks;
  Eigen::MatrixXd Wbar = Eigen::MatrixXd::Zero(p, p);
  bool flag = true;
  int rank_phase = 0;

  for (int iter = 0; iter < m; ++iter) {
    double f_best = kInf;
    int a_best = -1;
    for (int j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      Eigen::MatrixXd Wtry = Wbar + gs.contribution(j);
      const double f = flag ? -static_cast<double>(numerical_rank(Wtry))
                            : vol_cost_of_output(Wtry);
      if (f < f_best) {
        f_best = f;
        a_best = j;
      }
    }
    if (a_best < 0) { // every candidate scored +inf; fall back to lowest index
      for (int j = 0; j < n && a_best < 0; ++j)
        if (!chosen[j]) a_best = j;
    }
    chosen[a_best] = 1;
    picks.push_back(a_best);
    Wbar += gs.contribution(a_best);
    if (flag) {
      ++rank_phase;
      if (numerical_rank(Wbar) == p) flag = false;
    }
  }

  SelectionResult result;
  result.method = "greedy";
  result.drivers = NodeSet::sorted_unchecked(std::move(picks));
  result.diag.iterations = m;
  result.diag.rank_phase_len = rank_phase;
  result.diag.output_controllable = numerical_rank(Wbar) == p;
  ctx.fill_costs(result);
  result.diag.wall_ms = watch.ms();
  return result;
}

SelectionResult flp_select(const ProblemContext& ctx, int m, FlpEngine engine) {
  validate_budget(ctx, m);
  Stopwatch watch;
  const StructureMatrices& sm = ctx.structure();

  if (engine == FlpEngine::automatic)
    engine = ctx.n() <= kFlpExactMaxN ? FlpEngine::exact : FlpEngine::local_search;

  PMedianResult pm = engine == FlpEngine::exact ? pmedian_exact(sm.cost, m)
                                                : pmedian_local_search(sm.cost, m);

  SelectionResult result;
  result.method = "flp";
  result.drivers = NodeSet(pm.open, ctx.n());
  result.diag.proven_optimal = pm.proven_optimal;
  result.diag.bb_nodes = pm.nodes_explored;
  ctx.fill_costs(result);
  result.diag.output_controllable = std::isfinite(result.vol);
  result.diag.wall_ms = watch.ms();
  return result;
}

ProjectionResult probabilistic_projection(const Eigen::MatrixXd& B, int m, int m0,
                                          Rng& rng) {
  const int n = static_cast<int>(B.rows());
  if (m < 1 || m0 < 0 || m + m0 > n)
    throw config_error("probabilistic_projection needs 1 <= m and m + m0 <= n");

  Eigen::VectorXd scores = B.cwiseAbs().rowwise().sum();

  // candidate pool: the m + m0 largest scores, ties to the lower index
  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores(a) > scores(b); });
  std::vector<int> pool(order.begin(), order.begin() + m + m0);

  ProjectionResult res;
  std::vector<int> selected;
  while (static_cast<int>(selected.size()) < m) {
    double total = 0.0;
    for (int j : pool) total += scores(j);
    int picked;
    if (total <= 0.0) {
      res.degenerate = true; // fill deterministically by score order
      picked = pool.front();
    } else {
      std::uniform_real_distribution<double> unit(0.0, total);
      double u = unit(rng);
      picked = pool.back();
      for (int j : pool) {
        if (u < scores(j)) {
          picked = j;
          break;
        }
        u -= scores(j);
      }
    }
    selected.push_back(picked);
    pool.erase(std::find(pool.begin(), pool.end(), picked));
  }

  res.sparse = Eigen::MatrixXd::Zero(n, m);
  double mass = 0.0;
  for (int j : selected) mass += scores(j);
  for (int c = 0; c < m; ++c) res.sparse(selected[c], c) = m * scores(selected[c]);
  if (mass > 0.0) res.sparse /= mass;
  res.support = NodeSet::sorted_unchecked(std::move(selected));
  return res;
}

namespace {

// Smooth surrogate used by the step-size backtracking: the expected energy
// of the dense, unprojected input matrix.
double unprojected_energy(const GramianContext& gc, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& CE) {
  Eigen::MatrixXd W = gc.full_gramian(B * B.transpose());
  Eigen::MatrixXd Wbar = gc.C() * W * gc.C().transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (Wbar + Wbar.transpose()));
  if (llt.info() != Eigen::Success) return kInf;
  return llt.solve(CE * CE.transpose()).trace();
}

} // namespace

SelectionResult lpgm_select(const ProblemContext& ctx, int m, const LpgmParams& params,
                            std::uint64_t seed) {
  validate_budget(ctx, m);
  if (std::isinf(ctx.horizon()))
    throw config_error("lpgm_select needs a finite horizon t_f");
  Stopwatch watch;

  const GramianContext& gc = ctx.gramian();
  const int n = ctx.n();
  const int m0 = params.slack >= 0 ? params.slack : m;
  if (m + m0 > n) throw config_error("lpgm_select: m + m0 exceeds n");

  Rng rng(seed);

  // B0: m distinct random versors plus small uniform noise everywhere
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, m);
  {
    std::vector<int> rows = random_subset(n, m, rng);
    for (int c = 0; c < m; ++c) B(rows[c], c) = 1.0;
    std::uniform_real_distribution<double> noise(0.0, 1e-3);
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < m; ++c) B(j, c) += noise(rng);
  }

  const Eigen::MatrixXd CE = gc.C() * gc.exp_Atf(); // C e^{A t_f}
  LyapunovSolver adjoint(gc.A().transpose());

  double eta = params.eta0;
  double e_best = kInf;
  NodeSet support_best;
  int best_iter = -1;

  for (int k = 0; k < params.iterations; ++k) {
    ProjectionResult proj = probabilistic_projection(B, m, m0, rng);
    const Eigen::MatrixXd& BL0 = proj.sparse;

    Eigen::MatrixXd W = gc.full_gramian(BL0 * BL0.transpose());
    Eigen::MatrixXd Wbar = gc.C() * W * gc.C().transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (Wbar + Wbar.transpose()));

    double e_k = kInf;
    Eigen::MatrixXd grad;
    if (llt.info() == Eigen::Success) {
      e_k = llt.solve(CE * CE.transpose()).trace();
      // gradient -2 Y B^{L0} with Y the finite-horizon Gramian of (A^T, R),
      // R = C^T Wbar^{-1} C X_f C^T Wbar^{-1} C = (C^T Wbar^{-1} CE)(...)^T
      Eigen::MatrixXd PE = gc.C().transpose() * llt.solve(CE); // n x n
      Eigen::MatrixXd R = PE * PE.transpose();
      Eigen::MatrixXd Yinf = adjoint.solve(R);
      Eigen::MatrixXd Y =
          Yinf - gc.exp_Atf().transpose() * Yinf * gc.exp_Atf();
      grad = -2.0 * Y * BL0;
    }

    Eigen::MatrixXd base;
    if (e_k < e_best) {
      e_best = e_k;
      support_best = proj.support;
      best_iter = k;
      base = BL0;
    } else {
      base = B;
    }

    if (!std::isfinite(e_k)) continue; // hold B, re-project next iteration

    const double e_base = unprojected_energy(gc, base, CE);
    Eigen::MatrixXd next = base - eta * grad;
    while (eta > 1e-8 && unprojected_energy(gc, next, CE) > e_base) {
      eta *= 0.5;
      next = base - eta * grad;
    }
    B = std::move(next);
  }

  SelectionResult result;
  result.method = "lpgm";
  if (best_iter < 0) {
    // no projected iterate was output controllable; report the last support
    result.drivers = probabilistic_projection(B, m, m0, rng).support;
    result.diag.output_controllable = false;
  } else {
    result.drivers = support_best;
  }
  result.diag.iterations = params.iterations;
  result.diag.best_iterate = best_iter;
  ctx.fill_costs(result);
  if (!std::isfinite(result.vol)) result.diag.output_controllable = false;
  result.diag.wall_ms = watch.ms();
  return result;
}

std::optional<NodeSet> hill_climb(const StructureMatrices& sm, int m, double target_cost,
                                  double epsilon, int max_iterations,
                                  std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw config_error("hill_climb needs epsilon > 0");
  if (max_iterations < 1) throw config_error("hill_climb needs at least one iteration");
  const int n = static_cast<int>(sm.cost.rows());
  if (m < 1 || m > n) throw config_error("hill_climb: need 1 <= m <= n");
  Rng rng(seed);

  std::vector<int> inside = random_subset(n, m, rng);
  std::vector<char> in(n, 0);
  for (int j : inside) in[j] = 1;
  std::vector<int> outside;
  for (int j = 0; j < n; ++j)
    if (!in[j]) outside.push_back(j);

  auto within_band = [&](double c) {
    return target_cost - epsilon <= c && c <= target_cost + epsilon;
  };

  double current = flp_set_cost(sm.cost, inside);
  if (within_band(current)) return NodeSet::sorted_unchecked(inside);

  for (int iter = 1; iter < max_iterations; ++iter) {
    if (outside.empty()) break; // m == n, nothing to swap
    const int ia = std::uniform_int_distribution<int>(0, m - 1)(rng);
    const int ib =
        std::uniform_int_distribution<int>(0, static_cast<int>(outside.size()) - 1)(rng);

    std::vector<int> trial = inside;
    trial[ia] = outside[ib];
    const double cost = flp_set_cost(sm.cost, trial);
    if (within_band(cost)) return NodeSet::sorted_unchecked(std::move(trial));
    if (std::abs(target_cost - cost) < std::abs(target_cost - current)) {
      std::swap(inside[ia], outside[ib]);
      current = cost;
    }
  }
  return std::nullopt;
}

} // namespace netsel
