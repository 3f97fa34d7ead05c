#pragma once

#include <string>
#include <vector>

namespace netsel {

inline constexpr const char* kVersion = "0.1.0";

/// Rectangular string table with a header row; the common currency of the
/// CSV emitters. Cells must not contain commas or newlines.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

/// Fixed shortest round-trip formatting so reruns emit identical bytes.
std::string format_double(double v);

void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
};

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;
  bool valid = false;
};

void write_svg_scatter(const std::string& path, const std::vector<ScatterPoint>& points,
                       const FitLine& fit, const std::string& x_label,
                       const std::string& y_label, const std::string& title);

struct HistogramData {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<long> counts;
};

HistogramData make_histogram(const std::vector<double>& values, int bins);

void write_svg_histogram(const std::string& path, const HistogramData& hist,
                         const std::string& x_label, const std::string& title);

} // namespace netsel
