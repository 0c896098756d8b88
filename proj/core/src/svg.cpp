#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrfs/experiment.hpp"

namespace lrfs {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  CsvTable table;
  std::string line;
  if (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> column(const CsvTable& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw std::runtime_error("csv column missing: " + name);
  const std::size_t idx = static_cast<std::size_t>(it - t.columns.begin());
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(r.at(idx));
  return out;
}

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<ChartSeries>& series) {
  const double width = 820, height = 500;
  const double ml = 70, mr = 20, mt = 46, mb = 56;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        first = false;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (y_min > 0.0) y_min = 0.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  if (x_max <= x_min) x_max = x_min + 1.0;
  y_max *= 1.05;

  const auto px = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
  };
  const auto py = [&](double y) {
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
       "font-family=\"sans-serif\">"
    << title << "</text>\n";

  // grid + ticks
  const double xs = nice_step(x_max - x_min), ys = nice_step(y_max - y_min);
  for (double x = std::ceil(x_min / xs) * xs; x <= x_max + 1e-9; x += xs) {
    f << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(py(y_min)) << "\" x2=\""
      << num(px(x)) << "\" y2=\"" << num(py(y_max)) << "\" stroke=\"#dddddd\"/>\n";
    f << "<text x=\"" << num(px(x)) << "\" y=\"" << num(height - mb + 18)
      << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(x)
      << "</text>\n";
  }
  for (double y = std::ceil(y_min / ys) * ys; y <= y_max + 1e-9; y += ys) {
    f << "<line x1=\"" << num(px(x_min)) << "\" y1=\"" << num(py(y)) << "\" x2=\""
      << num(px(x_max)) << "\" y2=\"" << num(py(y)) << "\" stroke=\"#dddddd\"/>\n";
    f << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(y) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(y)
      << "</text>\n";
  }
  f << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
    << "\" height=\"" << height - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  f << "<text x=\"" << width / 2 << "\" y=\"" << height - 14
    << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
    << "</text>\n";
  f << "<text x=\"18\" y=\"" << height / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
       "transform=\"rotate(-90 18 "
    << height / 2 << ")\">" << y_label << "</text>\n";

  double legend_y = mt + 16;
  for (const auto& s : series) {
    if (s.x.empty()) continue;
    f << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.step_style && i > 0)
        f << num(px(s.x[i])) << "," << num(py(s.y[i - 1])) << " ";
      f << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
    }
    f << "\"/>\n";
    f << "<line x1=\"" << ml + 12 << "\" y1=\"" << num(legend_y - 4) << "\" x2=\"" << ml + 36
      << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << s.color
      << "\" stroke-width=\"2\"/>\n";
    f << "<text x=\"" << ml + 42 << "\" y=\"" << num(legend_y)
      << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.name << "</text>\n";
    legend_y += 16;
  }
  f << "</svg>\n";
}

void plot_from_csv(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);

  const CsvTable card = read_csv((base / "cardinality.csv").string());
  const auto t = column(card, "time");
  ChartSeries truth{"true count", "#202020", t, column(card, "true_n"), true};
  ChartSeries est{"mean estimate", "#c02020", t, column(card, "mean_est_n"), false};
  write_svg_chart((base / "cardinality.svg").string(), "Estimated number of targets", "time step",
                  "targets", {truth, est});

  const CsvTable ospa_table = read_csv((base / "ospa.csv").string());
  ChartSeries o{"mean OSPA", "#2040c0", column(ospa_table, "time"),
                column(ospa_table, "mean_ospa"), false};
  write_svg_chart((base / "ospa.svg").string(), "OSPA distance", "time step", "distance (m)",
                  {o});
}

}  // namespace lrfs
