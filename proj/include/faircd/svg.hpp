#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "faircd/common.hpp"

namespace faircd {

struct ScatterPoint {
  double x = 0.0, y = 0.0;
  double x_err = 0.0, y_err = 0.0;
  std::string label;
};

struct ScatterPlot {
  std::string x_label, y_label;
  std::vector<ScatterPoint> points;
  bool phi_guide = false;  // draw the Φ = 0 line
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  // Two decimals keep the file small and stable.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Minimal static scatter: axes, points with error bars, and the
/// perfect-fairness guides (blue dashed at IB_G = 0, red dashed at Φ = 0).
inline void write_svg(std::ostream& os, const ScatterPlot& plot) {
  constexpr double W = 560, H = 420, L = 70, R = 20, T = 20, B = 60;
  double x_lo = 0.0, x_hi = 0.05, y_lo = 0.0, y_hi = 1.0;
  for (const auto& p : plot.points) {
    x_hi = std::max(x_hi, p.x + p.x_err);
    y_lo = std::min(y_lo, p.y - p.y_err);
    y_hi = std::max(y_hi, p.y + p.y_err);
  }
  if (plot.phi_guide) {
    const double a = std::max(std::abs(y_lo), std::abs(y_hi));
    y_lo = -a;
    y_hi = a;
  }
  x_hi *= 1.1;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;
  auto sx = [&](double x) { return L + (x - x_lo) / (x_hi - x_lo) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y_lo) / (y_hi - y_lo) * (H - T - B); };
  using detail::num;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
     << W << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0, yv = y_lo + (y_hi - y_lo) * i / 4.0;
    os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
       << num(xv) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << num(sy(yv) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
       << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << H - 15
     << "\" font-size=\"13\" text-anchor=\"middle\">" << detail::xml_escape(plot.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << num((T + H - B) / 2) << "\" font-size=\"13\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 18 " << num((T + H - B) / 2) << ")\">" << detail::xml_escape(plot.y_label)
     << "</text>\n";
  // guides
  os << "<line x1=\"" << num(sx(0.0)) << "\" y1=\"" << T << "\" x2=\"" << num(sx(0.0)) << "\" y2=\"" << H - B
     << "\" stroke=\"blue\" stroke-dasharray=\"6,4\"/>\n";
  if (plot.phi_guide) {
    os << "<line x1=\"" << L << "\" y1=\"" << num(sy(0.0)) << "\" x2=\"" << W - R << "\" y2=\"" << num(sy(0.0))
       << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
  }
  // points
  for (const auto& p : plot.points) {
    if (p.x_err > 0) {
      os << "<line x1=\"" << num(sx(p.x - p.x_err)) << "\" y1=\"" << num(sy(p.y)) << "\" x2=\""
         << num(sx(p.x + p.x_err)) << "\" y2=\"" << num(sy(p.y)) << "\" stroke=\"gray\"/>\n";
    }
    if (p.y_err > 0) {
      os << "<line x1=\"" << num(sx(p.x)) << "\" y1=\"" << num(sy(p.y - p.y_err)) << "\" x2=\"" << num(sx(p.x))
         << "\" y2=\"" << num(sy(p.y + p.y_err)) << "\" stroke=\"gray\"/>\n";
    }
    os << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"4\" fill=\"black\"><title>"
       << detail::xml_escape(p.label) << "</title></circle>\n";
    os << "<text x=\"" << num(sx(p.x) + 6) << "\" y=\"" << num(sy(p.y) - 6) << "\" font-size=\"10\">"
       << detail::xml_escape(p.label) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace faircd
