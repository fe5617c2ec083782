// Copyright 2026 The maskq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "maskq/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace maskq {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

void Header(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << Escape(title) << "</text>\n";
}

void Axes(std::ostringstream& out, const Range& xr, const Range& yr, const std::string& x_label,
          const std::string& y_label, bool x_ticks) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double py = y0 - f * (y0 - y1);
    out << "<text x=\"" << x0 - 6 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << Num(yr.lo + f * (yr.hi - yr.lo)) << "</text>\n";
    if (x_ticks) {
      const double px = x0 + f * (x1 - x0);
      out << "<text x=\"" << px << "\" y=\"" << y0 + 16
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << Num(xr.lo + f * (xr.hi - xr.lo)) << "</text>\n";
    }
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << Escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (y0 + y1) / 2 << ")\">" << Escape(y_label) << "</text>\n";
}

}  // namespace

std::string LineChart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series) {
  Range xr, yr;
  for (const Series& s : series) {
    for (double v : s.x) xr.Add(v);
    for (double v : s.y) yr.Add(v);
  }
  xr.Finish();
  yr.Finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto px = [&](double x) { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
  auto py = [&](double y) { return y0 - (y - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

  std::ostringstream out;
  Header(out, title);
  Axes(out, xr, yr, x_label, y_label, true);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << Num(px(s.x[i])) << "," << Num(py(s.y[i])) << " ";
    }
    out << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * k;
    out << "<rect x=\"" << x1 + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n"
        << "<text x=\"" << x1 + 26 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << Escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string BarChart(const std::string& title, const std::string& y_label,
                     const std::vector<std::string>& labels, const std::vector<double>& values) {
  Range yr;
  yr.Add(0.0);
  for (double v : values) yr.Add(v);
  yr.Finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto py = [&](double y) { return y0 - (y - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

  std::ostringstream out;
  Header(out, title);
  Axes(out, yr, yr, "", y_label, false);
  const std::size_t n = std::min(labels.size(), values.size());
  const double slot = n == 0 ? 0.0 : (x1 - x0) / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double top = py(std::max(values[i], 0.0));
    const double base = py(std::min(values[i], 0.0));
    const double left = x0 + slot * i + slot * 0.15;
    out << "<rect x=\"" << Num(left) << "\" y=\"" << Num(top) << "\" width=\"" << Num(slot * 0.7)
        << "\" height=\"" << Num(std::max(base - top, 0.5)) << "\" fill=\"" << kColors[0]
        << "\"/>\n"
        << "<text x=\"" << Num(left + slot * 0.35) << "\" y=\"" << y0 + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << Escape(labels[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace maskq
