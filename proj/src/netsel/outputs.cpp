#include "netsel/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "netsel/errors.hpp"

namespace netsel {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const Table& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].find_first_of(",\n") != std::string::npos)
        throw config_error("CSV cell may not contain a comma or newline");
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  emit_row(table.columns);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw config_error("CSV row width mismatch");
    emit_row(row);
  }
  if (!out) throw config_error("write failed for " + path);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);
  Table table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (header) {
      table.columns = std::move(cells);
      header = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 60;

struct AxisMap {
  double lo, hi;
  double pix_lo, pix_hi;
  double operator()(double v) const {
    const double t = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

void svg_header(std::ofstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
}

void svg_axes(std::ofstream& out, const AxisMap& xm, const AxisMap& ym,
              const std::string& x_label, const std::string& y_label) {
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kMargin << "\" y2=\"" << kMargin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << kHeight / 2 << ")\">" << y_label << "</text>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" font-size=\"11\">" << format_double(xm.lo) << "</text>\n";
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(xm.hi) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ym.lo) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ym.hi) << "</text>\n";
}

} // namespace

void write_svg_scatter(const std::string& path, const std::vector<ScatterPoint>& points,
                       const FitLine& fit, const std::string& x_label,
                       const std::string& y_label, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);

  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (!points.empty()) {
    xlo = xhi = points[0].x;
    ylo = yhi = points[0].y;
    for (const auto& pt : points) {
      xlo = std::min(xlo, pt.x);
      xhi = std::max(xhi, pt.x);
      ylo = std::min(ylo, pt.y);
      yhi = std::max(yhi, pt.y);
    }
  }
  const double xpad = (xhi > xlo) ? 0.05 * (xhi - xlo) : 1.0;
  const double ypad = (yhi > ylo) ? 0.05 * (yhi - ylo) : 1.0;
  AxisMap xm{xlo - xpad, xhi + xpad, static_cast<double>(kMargin),
             static_cast<double>(kWidth - kMargin)};
  AxisMap ym{ylo - ypad, yhi + ypad, static_cast<double>(kHeight - kMargin),
             static_cast<double>(kMargin)};

  svg_header(out, title);
  svg_axes(out, xm, ym, x_label, y_label);
  for (const auto& pt : points)
    out << "<circle cx=\"" << xm(pt.x) << "\" cy=\"" << ym(pt.y)
        << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  if (fit.valid) {
    const double y1 = fit.intercept + fit.slope * xm.lo;
    const double y2 = fit.intercept + fit.slope * xm.hi;
    out << "<line x1=\"" << xm(xm.lo) << "\" y1=\"" << ym(y1) << "\" x2=\"" << xm(xm.hi)
        << "\" y2=\"" << ym(y2) << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
}

HistogramData make_histogram(const std::vector<double>& values, int bins) {
  HistogramData hist;
  if (bins < 1) throw config_error("histogram needs at least one bin");
  if (values.empty()) {
    hist.counts.assign(bins, 0);
    return hist;
  }
  hist.lo = *std::min_element(values.begin(), values.end());
  hist.hi = *std::max_element(values.begin(), values.end());
  if (hist.hi <= hist.lo) {
    hist.counts.assign(1, static_cast<long>(values.size()));
    hist.hi = hist.lo;
    return hist;
  }
  hist.counts.assign(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - hist.lo) / (hist.hi - hist.lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    ++hist.counts[b];
  }
  return hist;
}

void write_svg_histogram(const std::string& path, const HistogramData& hist,
                         const std::string& x_label, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);

  long peak = 1;
  for (long c : hist.counts) peak = std::max(peak, c);
  const int bins = static_cast<int>(hist.counts.size());
  AxisMap xm{hist.lo, hist.hi > hist.lo ? hist.hi : hist.lo + 1.0,
             static_cast<double>(kMargin), static_cast<double>(kWidth - kMargin)};
  AxisMap ym{0.0, static_cast<double>(peak), static_cast<double>(kHeight - kMargin),
             static_cast<double>(kMargin)};

  svg_header(out, title);
  svg_axes(out, xm, ym, x_label, "count");
  const double step = (xm.pix_hi - xm.pix_lo) / bins;
  for (int b = 0; b < bins; ++b) {
    const double x = xm.pix_lo + b * step;
    const double top = ym(static_cast<double>(hist.counts[b]));
    out << "<rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << step * 0.92
        << "\" height=\"" << (kHeight - kMargin) - top
        << "\" fill=\"grey\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  out << "</svg>\n";
}

} // namespace netsel
