// Command-line front end: generate graphs, run one selection problem, and
// drive the batch correlation / comparison experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "netsel/edge_list.hpp"
#include "netsel/errors.hpp"
#include "netsel/experiment.hpp"
#include "netsel/generators.hpp"
#include "netsel/pmedian.hpp"
#include "netsel/selectors.hpp"

namespace {

using namespace netsel;

double parse_tf(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "Inf")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    if (!(v > 0.0)) throw config_error("--tf must be positive (or 'inf')");
    return v;
  } catch (const std::invalid_argument&) {
    throw config_error("cannot parse --tf value '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct GraphArgs {
  std::string family = "erdos_renyi";
  int n = 50;
  double kav = 6.0;
  double rewire = 0.05;
  double gamma = 1.0;
  double nu = 0.0;
  bool directed = false;
  std::uint64_t seed = 1;
  std::string input; // read an edge list instead of generating
};

void add_graph_flags(CLI::App* cmd, GraphArgs& args, bool allow_input) {
  cmd->add_option("--family", args.family,
                  "graph family: erdos_renyi|k_regular|watts_strogatz|power_law_config");
  cmd->add_option("--n", args.n, "node count");
  cmd->add_option("--kav", args.kav, "mean degree (exact degree for k_regular)");
  cmd->add_option("--rewire", args.rewire, "Watts-Strogatz rewiring probability");
  cmd->add_option("--gamma", args.gamma, "uniform edge weight");
  cmd->add_option("--nu", args.nu, "loop weight magnitude; 0 = gamma*(k_max+1)");
  cmd->add_flag("--directed", args.directed, "generate the directed variant");
  cmd->add_option("--seed", args.seed, "random seed");
  if (allow_input)
    cmd->add_option("--in", args.input, "read graph from an edge-list file instead");
}

Graph make_graph(const GraphArgs& args) {
  if (!args.input.empty()) return read_edge_list(args.input);
  GenParams params{args.kav, args.rewire, args.gamma, args.nu};
  return gen_graph(parse_family(args.family), args.n, params, args.directed, args.seed);
}

nlohmann::json result_to_json(const SelectionResult& res) {
  nlohmann::json j;
  j["method"] = res.method;
  j["drivers"] = res.drivers.indices();
  j["vol_cost"] = format_double(res.vol);
  j["expected_energy"] = format_double(res.energy);
  j["flp_cost"] = format_double(res.flp);
  j["iterations"] = res.diag.iterations;
  j["wall_ms"] = res.diag.wall_ms;
  j["rank_phase_len"] = res.diag.rank_phase_len;
  j["best_iterate"] = res.diag.best_iterate;
  j["proven_optimal"] = res.diag.proven_optimal;
  j["bb_nodes"] = res.diag.bb_nodes;
  j["output_controllable"] = res.diag.output_controllable;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"driver-node selection toolkit"};
  app.require_subcommand(1);

  // ---- generate ----
  GraphArgs gen_args;
  std::string gen_out = "graph.edges";
  auto* gen = app.add_subcommand("generate", "generate a graph and write an edge list");
  add_graph_flags(gen, gen_args, /*allow_input=*/false);
  gen->add_option("--out", gen_out, "output edge-list path");

  // ---- select ----
  GraphArgs sel_args;
  int sel_p = 10, sel_m = 3;
  std::string sel_method = "greedy";
  std::string sel_tf = "inf";
  std::string sel_targets;
  std::string sel_out;
  double hill_target = 0.0, hill_eps = 0.1;
  int hill_iters = 10000;
  bool hill_target_set = false;
  LpgmParams lpgm;
  auto* sel = app.add_subcommand("select", "solve one driver-selection problem");
  add_graph_flags(sel, sel_args, /*allow_input=*/true);
  sel->add_option("--p", sel_p, "number of random targets");
  sel->add_option("--targets", sel_targets, "explicit target list, e.g. 0,4,7");
  sel->add_option("--m", sel_m, "driver budget");
  sel->add_option("--method", sel_method, "greedy|flp|lpgm|hill");
  sel->add_option("--tf", sel_tf, "horizon, positive real or 'inf'");
  sel->add_option("--target-cost", hill_target, "hill climb: desired FLP value")
      ->each([&](const std::string&) { hill_target_set = true; });
  sel->add_option("--epsilon", hill_eps, "hill climb: acceptance band half-width");
  sel->add_option("--iters", hill_iters, "hill climb: max iterations");
  sel->add_option("--lpgm-eta", lpgm.eta0, "lpgm: initial step size");
  sel->add_option("--lpgm-iters", lpgm.iterations, "lpgm: iteration count");
  sel->add_option("--lpgm-slack", lpgm.slack, "lpgm: projection pool slack m0 (-1 = m)");
  sel->add_option("--out", sel_out, "write the JSON result here instead of stdout");

  // ---- correlate / compare ----
  ExperimentConfig corr_cfg;
  GraphArgs corr_args;
  std::string corr_tf = "inf";
  corr_cfg.realizations = 5;
  auto* corr = app.add_subcommand("correlate",
                                  "hill-climb an FLP grid and correlate the Gramian costs");
  add_graph_flags(corr, corr_args, /*allow_input=*/false);
  corr->add_option("--p", corr_cfg.p, "number of random targets");
  corr->add_option("--m", corr_cfg.m, "driver budget");
  corr->add_option("--tf", corr_tf, "horizon, positive real or 'inf'");
  corr->add_option("--realizations", corr_cfg.realizations, "number of graph seeds");
  corr->add_option("--grid-points", corr_cfg.grid_points, "FLP grid size");
  corr->add_option("--hill-iters", corr_cfg.hill_iterations, "hill climb budget");
  corr->add_option("--out", corr_cfg.out_dir, "output directory");
  corr->add_option("--format", corr_cfg.formats, "csv|json|svg (repeatable)");
  corr->add_option("--threads", corr_cfg.threads, "worker threads (0 = auto)");

  ExperimentConfig cmp_cfg;
  GraphArgs cmp_args;
  std::string cmp_tf = "inf";
  std::string cmp_methods = "greedy,flp";
  auto* cmp = app.add_subcommand("compare", "head-to-head method comparison");
  add_graph_flags(cmp, cmp_args, /*allow_input=*/false);
  cmp->add_option("--p", cmp_cfg.p, "number of random targets");
  cmp->add_option("--m", cmp_cfg.m, "driver budget");
  cmp->add_option("--tf", cmp_tf, "horizon, positive real or 'inf'");
  cmp->add_option("--realizations", cmp_cfg.realizations, "realization count");
  cmp->add_option("--method", cmp_methods, "comma list from greedy,flp,lpgm");
  cmp->add_option("--bins", cmp_cfg.histogram_bins, "histogram bins");
  cmp->add_option("--lpgm-eta", cmp_cfg.lpgm.eta0, "lpgm: initial step size");
  cmp->add_option("--lpgm-iters", cmp_cfg.lpgm.iterations, "lpgm: iteration count");
  cmp->add_option("--lpgm-slack", cmp_cfg.lpgm.slack, "lpgm: projection pool slack");
  cmp->add_option("--out", cmp_cfg.out_dir, "output directory");
  cmp->add_option("--format", cmp_cfg.formats, "csv|json|svg (repeatable)");
  cmp->add_option("--threads", cmp_cfg.threads, "worker threads (0 = auto)");

  // ---- check-ilp-size ----
  int ilp_n = 50, ilp_p = 20;
  auto* ilp = app.add_subcommand("check-ilp-size",
                                 "count constraint-matrix nonzeros of the assignment ILP");
  ilp->add_option("--n", ilp_n, "candidate count");
  ilp->add_option("--p", ilp_p, "target count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2; // bad flags are configuration errors
  }

  if (gen->parsed()) {
    Graph g = make_graph(gen_args);
    write_edge_list(g, gen_out);
    std::cout << "wrote " << gen_out << " (n=" << g.n() << ", edges=" << g.edge_count()
              << ", gamma=" << g.gamma() << ", nu=" << g.nu() << ")\n";
    return 0;
  }

  if (sel->parsed()) {
    Graph g = make_graph(sel_args);
    const double tf = parse_tf(sel_tf);
    NodeSet targets;
    if (!sel_targets.empty()) {
      std::vector<int> idx;
      for (const auto& tok : split_list(sel_targets)) idx.push_back(std::stoi(tok));
      std::sort(idx.begin(), idx.end());
      targets = NodeSet(idx, g.n());
    } else {
      Rng trng(derive_seed(sel_args.seed, 1));
      targets = NodeSet(random_subset(g.n(), sel_p, trng), g.n());
    }
    ProblemContext ctx(g, targets, tf);

    SelectionResult res;
    if (sel_method == "greedy") {
      res = greedy_select(ctx, sel_m);
    } else if (sel_method == "flp") {
      res = flp_select(ctx, sel_m);
    } else if (sel_method == "lpgm") {
      res = lpgm_select(ctx, sel_m, lpgm, derive_seed(sel_args.seed, 7));
    } else if (sel_method == "hill") {
      if (!hill_target_set) throw config_error("hill needs --target-cost");
      auto found = hill_climb(ctx.structure(), sel_m, hill_target, hill_eps, hill_iters,
                              derive_seed(sel_args.seed, 9));
      if (!found) throw numerical_error("hill climb found no set within the band");
      res.method = "hill";
      res.drivers = *found;
      ctx.fill_costs(res);
    } else {
      throw config_error("unknown --method " + sel_method);
    }

    nlohmann::json j = result_to_json(res);
    j["n"] = g.n();
    j["targets"] = targets.indices();
    j["m"] = sel_m;
    j["gamma"] = format_double(g.gamma());
    j["nu"] = format_double(g.nu());
    j["tf"] = std::isinf(tf) ? "inf" : format_double(tf);
    j["seed"] = sel_args.seed;
    if (sel_out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream out(sel_out);
      if (!out) throw config_error("cannot write " + sel_out);
      out << j.dump(2) << "\n";
      std::cout << "wrote " << sel_out << "\n";
    }
    return 0;
  }

  auto fill_experiment = [](ExperimentConfig& cfg, const GraphArgs& args,
                            const std::string& tf) {
    cfg.family = parse_family(args.family);
    cfg.n = args.n;
    cfg.k_av = args.kav;
    cfg.rewire = args.rewire;
    cfg.directed = args.directed;
    cfg.gamma = args.gamma;
    cfg.nu = args.nu;
    cfg.seed = args.seed;
    cfg.t_f = parse_tf(tf);
  };

  if (corr->parsed()) {
    fill_experiment(corr_cfg, corr_args, corr_tf);
    corr_cfg.methods = {"flp"}; // hill climbing drives the grid; no comparison methods
    CorrelationResult res = run_correlation(corr_cfg);
    emit_correlation(corr_cfg, res);
    std::cout << "rows=" << res.rows.size() << " found=" << res.found_count
              << " pearson_vol="
              << (std::isnan(res.pearson_vol) ? "n/a" : format_double(res.pearson_vol))
              << " pearson_energy="
              << (std::isnan(res.pearson_energy) ? "n/a"
                                                 : format_double(res.pearson_energy))
              << "\n";
    return 0;
  }

  if (cmp->parsed()) {
    fill_experiment(cmp_cfg, cmp_args, cmp_tf);
    cmp_cfg.methods = split_list(cmp_methods);
    HeadToHeadResult res = run_headtohead(cmp_cfg);
    emit_headtohead(cmp_cfg, res);
    std::cout << "included=" << res.included << " excluded=" << res.excluded;
    for (const auto& stat : res.stats)
      std::cout << " " << stat.name << ": flp_wins=" << format_double(stat.flp_win_frac)
                << " other_wins=" << format_double(stat.other_win_frac)
                << " ties=" << format_double(stat.tie_frac);
    std::cout << "\n";
    return 0;
  }

  if (ilp->parsed()) {
    const long long count = check_ilp_size(ilp_n, ilp_p);
    const long long formula = ilp_n + 3LL * ilp_n * ilp_p;
    std::cout << "nonzeros=" << count << " formula(n+3np)=" << formula
              << (count == formula ? " OK" : " MISMATCH") << "\n";
    return count == formula ? 0 : 3;
  }

  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const netsel::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const netsel::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
