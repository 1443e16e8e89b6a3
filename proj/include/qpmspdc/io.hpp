// CSV and SVG output. Numbers use the shortest decimal form that parses
// back to the same double, so files are byte-stable.
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qpmspdc/core.hpp"

namespace qpmspdc::io {

inline std::string formatNumber(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;  // written as "# key: value"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void meta(std::string key, double value) { metadata.emplace_back(std::move(key), formatNumber(value)); }
};

inline void writeCsv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << formatNumber(row[c]);
    os << '\n';
  }
}

inline std::string toCsv(const Table& t) {
  std::ostringstream os;
  writeCsv(os, t);
  return os.str();
}

inline void writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file: " + path);
  f << content;
  if (!f) throw InvalidInput("failed writing output file: " + path);
}

/// Reads a CSV written by writeCsv: metadata lines are skipped, the first
/// other line is the header.
inline Table readCsv(std::istream& is) {
  Table t;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos && colon > 2)
        t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(std::min(line.size(), colon + 2)));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc()) throw InvalidInput("bad number in CSV: " + c);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table readCsvFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open CSV file: " + path);
  return readCsv(f);
}

// ---------------------------------------------------------------------------

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Plain line plot, one polyline per series, linear axes.
inline std::string svgPlot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  static constexpr std::array<const char*, 4> colours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << formatNumber(std::round(xv * 1e6) / 1e6) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << formatNumber(std::round(yv * 1e4) / 1e4) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto* colour = colours[s % colours.size()];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < series[s].x.size(); ++j) os << px(series[s].x[j]) << ',' << py(series[s].y[j]) << ' ';
    os << "\"/>\n";
    if (!series[s].label.empty())
      os << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 16 * s << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
         << colour << "\">" << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qpmspdc::io
