#include "netsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "netsel/errors.hpp"
#include "netsel/pmedian.hpp"

namespace netsel {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int worker_count(const ExperimentConfig& cfg, int jobs) {
  int t = cfg.threads > 0 ? cfg.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  return std::min(t, std::max(jobs, 1));
}

// Order-independent parallel map; every job owns its output slot and a
// seed derived from its index, so the thread count never changes results.
void parallel_for(int jobs, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        fn(i);
      }
    }));
  }
  for (auto& f : futures) f.get();
}

bool has_format(const ExperimentConfig& cfg, const std::string& fmt) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) != cfg.formats.end();
}

std::string join_indices(const NodeSet& set) {
  std::string out;
  for (int j : set.indices()) {
    if (!out.empty()) out += ';';
    out += std::to_string(j);
  }
  return out;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.realizations < 1) throw config_error("realizations must be >= 1");
  if (cfg.p < 1 || cfg.p > cfg.n) throw config_error("need 1 <= p <= n");
  if (cfg.m < 1 || cfg.m > cfg.n) throw config_error("need 1 <= m <= n");
  if (cfg.methods.empty()) throw config_error("method list is empty");
  for (const auto& method : cfg.methods) {
    if (method != "greedy" && method != "flp" && method != "lpgm")
      throw config_error("unknown comparison method: " + method);
    if (method == "lpgm" && std::isinf(cfg.t_f))
      throw config_error("lpgm needs a finite --tf");
  }
}

} // namespace

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) return kNaN;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

FitLine least_squares_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  FitLine fit;
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.valid = true;
  return fit;
}

long long check_ilp_size(int n, int p) { return flp_constraint_nonzeros(n, p); }

// ---------------------------------------------------------------- config i/o

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["family"] = family_name(cfg.family);
  j["n"] = cfg.n;
  j["p"] = cfg.p;
  j["m"] = cfg.m;
  j["k_av"] = cfg.k_av;
  j["rewire"] = cfg.rewire;
  j["directed"] = cfg.directed;
  j["gamma"] = cfg.gamma;
  j["nu"] = cfg.nu;
  j["nu_rule"] = cfg.nu > 0 ? "fixed" : "auto: gamma * (max_in_degree + 1)";
  j["t_f"] = std::isinf(cfg.t_f) ? "inf" : format_double(cfg.t_f);
  j["realizations"] = cfg.realizations;
  j["seed"] = cfg.seed;
  j["methods"] = cfg.methods;
  j["grid_points"] = cfg.grid_points;
  j["hill_iterations"] = cfg.hill_iterations;
  j["histogram_bins"] = cfg.histogram_bins;
  j["lpgm_eta0"] = cfg.lpgm.eta0;
  j["lpgm_iterations"] = cfg.lpgm.iterations;
  j["lpgm_slack"] = cfg.lpgm.slack;
  j["out_dir"] = cfg.out_dir;
  j["formats"] = cfg.formats;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  cfg.family = parse_family(j.at("family").get<std::string>());
  cfg.n = j.at("n").get<int>();
  cfg.p = j.at("p").get<int>();
  cfg.m = j.at("m").get<int>();
  cfg.k_av = j.at("k_av").get<double>();
  cfg.rewire = j.at("rewire").get<double>();
  cfg.directed = j.at("directed").get<bool>();
  cfg.gamma = j.at("gamma").get<double>();
  cfg.nu = j.at("nu").get<double>();
  const std::string tf = j.at("t_f").get<std::string>();
  cfg.t_f = (tf == "inf") ? std::numeric_limits<double>::infinity() : std::stod(tf);
  cfg.realizations = j.at("realizations").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.grid_points = j.at("grid_points").get<int>();
  cfg.hill_iterations = j.at("hill_iterations").get<int>();
  cfg.histogram_bins = j.at("histogram_bins").get<int>();
  cfg.lpgm.eta0 = j.at("lpgm_eta0").get<double>();
  cfg.lpgm.iterations = j.at("lpgm_iterations").get<int>();
  cfg.lpgm.slack = j.at("lpgm_slack").get<int>();
  cfg.out_dir = j.at("out_dir").get<std::string>();
  cfg.formats = j.at("formats").get<std::vector<std::string>>();
  return cfg;
}

// ------------------------------------------------------------- correlation

CorrelationResult run_correlation(const ExperimentConfig& cfg) {
  if (cfg.grid_points < 1) throw config_error("grid_points must be >= 1");
  validate(cfg);

  CorrelationResult res;
  std::vector<std::vector<CorrelationRow>> per_seed(cfg.realizations);
  std::vector<char> seed_failed(cfg.realizations, 0);

  parallel_for(cfg.realizations, worker_count(cfg, cfg.realizations), [&](int s) {
    const std::uint64_t graph_seed = derive_seed(cfg.seed, s);
    try {
      GenParams gp{cfg.k_av, cfg.rewire, cfg.gamma, cfg.nu};
      Graph g = gen_graph(cfg.family, cfg.n, gp, cfg.directed, graph_seed);
      Rng trng(derive_seed(graph_seed, 1));
      NodeSet targets(random_subset(cfg.n, cfg.p, trng), cfg.n);
      StructureMatrices sm = structure_matrices(g, targets);

      // grid endpoints: the all-candidates lower bound and the FLP value of
      // the median random m-set
      std::vector<int> all(cfg.n);
      for (int j = 0; j < cfg.n; ++j) all[j] = j;
      const double lo = flp_set_cost(sm.cost, all);
      Rng mrng(derive_seed(graph_seed, 2));
      std::vector<double> samples;
      for (int i = 0; i < 21; ++i)
        samples.push_back(flp_set_cost(sm.cost, random_subset(cfg.n, cfg.m, mrng)));
      std::nth_element(samples.begin(), samples.begin() + 10, samples.end());
      const double hi = samples[10];
      if (!std::isfinite(lo) || !std::isfinite(hi))
        throw numerical_error("FLP grid endpoints not finite");

      const double eps =
          std::max(std::abs(hi - lo) / (4.0 * std::max(cfg.grid_points - 1, 1)),
                   1e-9 * (1.0 + std::abs(hi)));

      GramianContext gc(g, targets, cfg.t_f);
      auto& rows = per_seed[s];
      for (int i = 0; i < cfg.grid_points; ++i) {
        CorrelationRow row;
        row.seed_index = s;
        row.graph_seed = graph_seed;
        row.target = cfg.grid_points == 1
                         ? hi
                         : lo + (hi - lo) * i / (cfg.grid_points - 1);
        row.gamma = g.gamma();
        row.nu = g.nu();
        row.t_f = cfg.t_f;
        auto found = hill_climb(sm, cfg.m, row.target, eps, cfg.hill_iterations,
                                derive_seed(graph_seed, 100 + i));
        if (found) {
          row.found = true;
          row.flp = flp_set_cost(sm, *found);
          Eigen::MatrixXd Wbar = gc.output_gramian(*found);
          row.vol = vol_cost_of_output(Wbar);
          row.energy = expected_energy_of_output(Wbar, gc.A(), gc.C(), cfg.t_f);
        }
        rows.push_back(row);
      }
    } catch (const std::exception& e) {
      seed_failed[s] = 1;
      std::cerr << "correlation seed " << s << " failed: " << e.what() << "\n";
    }
  });

  std::vector<double> xs_vol, ys_vol, xs_en, ys_en;
  double eps_any = 0.0;
  for (int s = 0; s < cfg.realizations; ++s) {
    if (seed_failed[s]) ++res.failed_seeds;
    for (const auto& row : per_seed[s]) {
      res.rows.push_back(row);
      if (!row.found) continue;
      ++res.found_count;
      if (std::isfinite(row.flp) && std::isfinite(row.vol)) {
        xs_vol.push_back(row.flp);
        ys_vol.push_back(row.vol);
      }
      if (std::isfinite(row.flp) && std::isfinite(row.energy) && !std::isinf(cfg.t_f)) {
        xs_en.push_back(row.flp);
        ys_en.push_back(row.energy);
      }
    }
  }
  (void)eps_any;
  res.hill_epsilon = 0.0; // per-seed epsilon recorded in manifest rule, not a single value
  res.pearson_vol = pearson_correlation(xs_vol, ys_vol);
  res.pearson_energy = pearson_correlation(xs_en, ys_en);
  res.fit_vol = least_squares_fit(xs_vol, ys_vol);
  res.fit_energy = least_squares_fit(xs_en, ys_en);
  return res;
}

// ------------------------------------------------------------- head-to-head

HeadToHeadResult run_headtohead(const ExperimentConfig& cfg) {
  validate(cfg);

  HeadToHeadResult res;
  res.records.resize(cfg.realizations);

  parallel_for(cfg.realizations, worker_count(cfg, cfg.realizations), [&](int r) {
    ComparisonRecord& rec = res.records[r];
    rec.realization = r;
    rec.seed = derive_seed(cfg.seed, r);
    rec.t_f = cfg.t_f;
    try {
      GenParams gp{cfg.k_av, cfg.rewire, cfg.gamma, cfg.nu};
      Graph g = gen_graph(cfg.family, cfg.n, gp, cfg.directed, rec.seed);
      rec.gamma = g.gamma();
      rec.nu = g.nu();
      Rng trng(derive_seed(rec.seed, 1));
      NodeSet targets(random_subset(cfg.n, cfg.p, trng), cfg.n);
      ProblemContext ctx(g, targets, cfg.t_f);

      for (const auto& method : cfg.methods) {
        if (method == "greedy") rec.results["greedy"] = greedy_select(ctx, cfg.m);
        else if (method == "flp") rec.results["flp"] = flp_select(ctx, cfg.m);
        else if (method == "lpgm")
          rec.results["lpgm"] =
              lpgm_select(ctx, cfg.m, cfg.lpgm, derive_seed(rec.seed, 7));
      }
      if (rec.results.count("flp") && rec.results.count("greedy"))
        rec.d_greedy = rec.results["flp"].vol - rec.results["greedy"].vol;
      if (rec.results.count("flp") && rec.results.count("lpgm"))
        rec.d_lpgm = rec.results["flp"].energy - rec.results["lpgm"].energy;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
      std::cerr << "realization " << r << " failed: " << e.what() << "\n";
    }
  });

  auto build_stat = [&](const std::string& name, auto getter) {
    ComparisonStat stat;
    stat.name = name;
    long win = 0, lose = 0, tie = 0;
    for (const auto& rec : res.records) {
      if (!rec.ok) continue;
      const double d = getter(rec);
      if (!std::isfinite(d)) continue;
      stat.values.push_back(d);
      if (d < 0) ++win;
      else if (d > 0) ++lose;
      else ++tie;
    }
    const double total = static_cast<double>(stat.values.size());
    if (total > 0) {
      stat.flp_win_frac = win / total;
      stat.other_win_frac = lose / total;
      stat.tie_frac = tie / total;
    }
    stat.hist = make_histogram(stat.values, cfg.histogram_bins);
    return stat;
  };

  const bool has_flp =
      std::find(cfg.methods.begin(), cfg.methods.end(), "flp") != cfg.methods.end();
  if (has_flp &&
      std::find(cfg.methods.begin(), cfg.methods.end(), "greedy") != cfg.methods.end())
    res.stats.push_back(
        build_stat("d_greedy", [](const ComparisonRecord& r) { return r.d_greedy; }));
  if (has_flp &&
      std::find(cfg.methods.begin(), cfg.methods.end(), "lpgm") != cfg.methods.end())
    res.stats.push_back(
        build_stat("d_lpgm", [](const ComparisonRecord& r) { return r.d_lpgm; }));

  for (const auto& rec : res.records)
    (rec.ok ? res.included : res.excluded) += 1;
  return res;
}

// ------------------------------------------------------------------ tables

Table correlation_table(const CorrelationResult& res) {
  Table t;
  t.columns = {"seed_index", "graph_seed", "grid_target", "found",
               "flp_cost",   "vol_cost",   "energy_cost", "gamma",
               "nu",         "tf"};
  for (const auto& row : res.rows) {
    t.rows.push_back({std::to_string(row.seed_index), std::to_string(row.graph_seed),
                      format_double(row.target), row.found ? "1" : "0",
                      format_double(row.flp), format_double(row.vol),
                      format_double(row.energy), format_double(row.gamma),
                      format_double(row.nu), format_double(row.t_f)});
  }
  return t;
}

Table headtohead_table(const HeadToHeadResult& res, const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"realization", "seed", "ok", "error", "gamma", "nu", "tf"};
  for (const auto& method : cfg.methods) {
    t.columns.push_back(method + "_drivers");
    t.columns.push_back(method + "_vol");
    t.columns.push_back(method + "_energy");
    t.columns.push_back(method + "_flp");
  }
  t.columns.push_back("d_greedy");
  t.columns.push_back("d_lpgm");

  for (const auto& rec : res.records) {
    std::vector<std::string> row = {std::to_string(rec.realization),
                                    std::to_string(rec.seed),
                                    rec.ok ? "1" : "0",
                                    rec.error,
                                    format_double(rec.gamma),
                                    format_double(rec.nu),
                                    format_double(rec.t_f)};
    for (auto& cell : row[3]) // error messages must stay CSV-safe
      if (cell == ',' || cell == '\n') cell = ';';
    for (const auto& method : cfg.methods) {
      auto it = rec.results.find(method);
      if (it == rec.results.end()) {
        row.insert(row.end(), {"", "nan", "nan", "nan"});
      } else {
        row.push_back(join_indices(it->second.drivers));
        row.push_back(format_double(it->second.vol));
        row.push_back(format_double(it->second.energy));
        row.push_back(format_double(it->second.flp));
      }
    }
    row.push_back(format_double(rec.d_greedy));
    row.push_back(format_double(rec.d_lpgm));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table histogram_table(const HistogramData& hist) {
  Table t;
  t.columns = {"bin_lo", "bin_hi", "count"};
  const int bins = static_cast<int>(hist.counts.size());
  const double width = bins > 0 && hist.hi > hist.lo ? (hist.hi - hist.lo) / bins : 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = hist.lo + b * width;
    const double hi = (b == bins - 1) ? hist.hi : hist.lo + (b + 1) * width;
    t.rows.push_back({format_double(lo), format_double(hi),
                      std::to_string(hist.counts[b])});
  }
  return t;
}

// ---------------------------------------------------------------- emission

namespace {

void write_manifest(const ExperimentConfig& cfg, const nlohmann::json& summary,
                    const std::string& path) {
  nlohmann::json j;
  j["tool"] = "netsel";
  j["version"] = kVersion;
  j["config"] = nlohmann::json::parse(config_to_json(cfg));
  j["summary"] = summary;
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

nlohmann::json fit_json(const FitLine& fit) {
  nlohmann::json j;
  j["valid"] = fit.valid;
  j["slope"] = fit.valid ? format_double(fit.slope) : "n/a";
  j["intercept"] = fit.valid ? format_double(fit.intercept) : "n/a";
  return j;
}

std::string nan_to_na(double v) { return std::isnan(v) ? "n/a" : format_double(v); }

} // namespace

void emit_correlation(const ExperimentConfig& cfg, const CorrelationResult& res) {
  if (has_format(cfg, "csv")) write_csv(correlation_table(res), out_path(cfg, "correlation.csv"));
  if (has_format(cfg, "json")) {
    nlohmann::json summary;
    summary["pearson_vol"] = nan_to_na(res.pearson_vol);
    summary["pearson_energy"] = nan_to_na(res.pearson_energy);
    summary["fit_vol"] = fit_json(res.fit_vol);
    summary["fit_energy"] = fit_json(res.fit_energy);
    summary["found_count"] = res.found_count;
    summary["row_count"] = res.rows.size();
    summary["failed_seeds"] = res.failed_seeds;
    summary["hill_epsilon_rule"] = "max(|hi-lo| / (4 (grid_points-1)), 1e-9 (1+|hi|))";
    write_manifest(cfg, summary, out_path(cfg, "manifest.json"));
  }
  if (has_format(cfg, "svg")) {
    std::vector<ScatterPoint> vol_pts, en_pts;
    for (const auto& row : res.rows) {
      if (!row.found) continue;
      if (std::isfinite(row.flp) && std::isfinite(row.vol))
        vol_pts.push_back({row.flp, row.vol});
      if (std::isfinite(row.flp) && std::isfinite(row.energy) && !std::isinf(cfg.t_f))
        en_pts.push_back({row.flp, row.energy});
    }
    write_svg_scatter(out_path(cfg, "correlation_vol.svg"), vol_pts, res.fit_vol,
                      "FLP cost", "volume cost", "volume cost vs FLP cost");
    if (!std::isinf(cfg.t_f))
      write_svg_scatter(out_path(cfg, "correlation_energy.svg"), en_pts, res.fit_energy,
                        "FLP cost", "expected energy", "expected energy vs FLP cost");
  }
}

void emit_headtohead(const ExperimentConfig& cfg, const HeadToHeadResult& res) {
  if (has_format(cfg, "csv")) {
    write_csv(headtohead_table(res, cfg), out_path(cfg, "comparison.csv"));
    for (const auto& stat : res.stats)
      write_csv(histogram_table(stat.hist),
                out_path(cfg, "histogram_" + stat.name + ".csv"));
  }
  if (has_format(cfg, "json")) {
    nlohmann::json summary;
    summary["included"] = res.included;
    summary["excluded"] = res.excluded;
    for (const auto& stat : res.stats) {
      nlohmann::json s;
      s["count"] = stat.values.size();
      s["flp_win_frac"] = format_double(stat.flp_win_frac);
      s["other_win_frac"] = format_double(stat.other_win_frac);
      s["tie_frac"] = format_double(stat.tie_frac);
      summary[stat.name] = s;
    }
    write_manifest(cfg, summary, out_path(cfg, "manifest.json"));
  }
  if (has_format(cfg, "svg")) {
    for (const auto& stat : res.stats)
      write_svg_histogram(out_path(cfg, "histogram_" + stat.name + ".svg"), stat.hist,
                          stat.name, stat.name + " over realizations");
  }
}

} // namespace netsel
