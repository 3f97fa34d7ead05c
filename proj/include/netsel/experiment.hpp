#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netsel/generators.hpp"
#include "netsel/outputs.hpp"
#include "netsel/selectors.hpp"

namespace netsel {

/// One batch run: graph family and sizes, horizon, methods, seeds, and
/// where the output files go.
struct ExperimentConfig {
  GraphFamily family = GraphFamily::erdos_renyi;
  int n = 50;
  int p = 20;
  int m = 10;
  double k_av = 6.0;
  double rewire = 0.05;
  bool directed = false;
  double gamma = 1.0;
  double nu = 0.0; // <= 0: per-graph default gamma * (k_max + 1)
  double t_f = std::numeric_limits<double>::infinity();
  int realizations = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> methods = {"greedy", "flp"};
  int grid_points = 20;
  int hill_iterations = 20000;
  int histogram_bins = 20;
  LpgmParams lpgm;
  std::string out_dir = ".";
  std::vector<std::string> formats = {"csv", "json", "svg"};
  int threads = 0; // 0: hardware concurrency
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

// ---- correlation study (hill climb to a grid of FLP values) ----

struct CorrelationRow {
  int seed_index = 0;
  std::uint64_t graph_seed = 0;
  double target = 0.0;
  bool found = false;
  double flp = std::numeric_limits<double>::quiet_NaN();
  double vol = std::numeric_limits<double>::quiet_NaN();
  double energy = std::numeric_limits<double>::quiet_NaN();
  double gamma = 0.0, nu = 0.0, t_f = 0.0;
};

struct CorrelationResult {
  std::vector<CorrelationRow> rows;
  FitLine fit_vol;
  FitLine fit_energy;
  double pearson_vol = std::numeric_limits<double>::quiet_NaN();
  double pearson_energy = std::numeric_limits<double>::quiet_NaN();
  double hill_epsilon = 0.0;
  int found_count = 0;
  int failed_seeds = 0;
};

CorrelationResult run_correlation(const ExperimentConfig& cfg);

// ---- head-to-head method comparison over many realizations ----

struct ComparisonRecord {
  int realization = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double gamma = 0.0, nu = 0.0, t_f = 0.0;
  std::map<std::string, SelectionResult> results;
  // difference statistics; the FLP set wins where the value is negative
  double d_greedy = std::numeric_limits<double>::quiet_NaN();
  double d_lpgm = std::numeric_limits<double>::quiet_NaN();
};

struct ComparisonStat {
  std::string name;
  std::vector<double> values; // finite D values, realization order
  HistogramData hist;
  double flp_win_frac = 0.0;
  double other_win_frac = 0.0;
  double tie_frac = 0.0;
};

struct HeadToHeadResult {
  std::vector<ComparisonRecord> records;
  int included = 0;
  int excluded = 0;
  std::vector<ComparisonStat> stats;
};

HeadToHeadResult run_headtohead(const ExperimentConfig& cfg);

/// Nonzero count of the assignment ILP constraint matrix (n + 3np).
long long check_ilp_size(int n, int p);

// ---- file emission ----

Table correlation_table(const CorrelationResult& res);
Table headtohead_table(const HeadToHeadResult& res, const ExperimentConfig& cfg);
Table histogram_table(const HistogramData& hist);

/// Write csv / json manifest / svg into cfg.out_dir per cfg.formats.
void emit_correlation(const ExperimentConfig& cfg, const CorrelationResult& res);
void emit_headtohead(const ExperimentConfig& cfg, const HeadToHeadResult& res);

// ---- shared statistics helpers ----

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys);
FitLine least_squares_fit(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace netsel
