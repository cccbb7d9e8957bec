#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "ssr/specseq.hpp"

namespace ssr {

struct ChartStyle {
  int cell = 16;    // pixels per unit in either direction
  int margin = 40;
  bool weights = true;  // color dots by weight
};

namespace detail {

inline const char* weight_color(int w) {
  static const char* palette[] = {"#1b1b1b", "#c0392b", "#2874a6", "#239b56", "#b9770e", "#7d3c98",
                                  "#117a65", "#a04000", "#2e4053", "#b03a2e"};
  return palette[std::size_t(w) % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

/**
 * SVG chart of a page in (s, t) coordinates, t = n - s pointing up. Each
 * bidegree gets one dot per weight with its dimension as label. When the
 * next page is given, d^r is drawn from (s, t) to (s - r, t + r - 1)
 * wherever both ends lose dimension.
 */
inline std::string chart_svg(const Page& page, const Window& win, const std::optional<Page>& next = std::nullopt,
                             int r = 0, const ChartStyle& st = {}) {
  auto dims = page.spec.cell_dims(win);
  std::map<Cell, i64> after;
  if (next) after = next->spec.cell_dims(win);

  i64 x_lo = win.s_lo == -kInf ? -10 : win.s_lo, x_hi = win.s_hi == kInf ? 10 : win.s_hi;
  i64 y_lo = win.n_lo - x_hi, y_hi = win.n_hi - x_lo;
  if (!dims.empty()) {
    x_lo = y_lo = kInf;
    x_hi = y_hi = -kInf;
    for (const auto& [c, d] : dims) {
      x_lo = std::min(x_lo, c.s), x_hi = std::max(x_hi, c.s);
      y_lo = std::min(y_lo, c.n - c.s), y_hi = std::max(y_hi, c.n - c.s);
    }
  }
  x_lo = std::min<i64>(x_lo, 0), x_hi = std::max<i64>(x_hi, 0);
  y_lo = std::min<i64>(y_lo, 0), y_hi = std::max<i64>(y_hi, 0);

  const i64 W = (x_hi - x_lo) * st.cell + 2 * st.margin;
  const i64 H = (y_hi - y_lo) * st.cell + 2 * st.margin;
  auto X = [&](i64 s) { return st.margin + (s - x_lo) * st.cell; };
  auto Y = [&](i64 t) { return st.margin + (y_hi - t) * st.cell; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\" font-family=\"monospace\" font-size=\"8\">\n";
  o << "<title>" << page.label << "</title>\n";
  o << "<defs><marker id=\"h\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\">"
       "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#555\"/></marker></defs>\n";
  o << "<line x1=\"" << X(x_lo) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(x_hi) << "\" y2=\"" << Y(0)
    << "\" stroke=\"#999\"/>\n";
  o << "<line x1=\"" << X(0) << "\" y1=\"" << Y(y_hi) << "\" x2=\"" << X(0) << "\" y2=\"" << Y(y_lo)
    << "\" stroke=\"#999\"/>\n";
  o << "<text x=\"" << X(x_hi) << "\" y=\"" << Y(0) + 12 << "\" text-anchor=\"end\">s</text>\n";
  o << "<text x=\"" << X(0) + 4 << "\" y=\"" << Y(y_hi) - 4 << "\">t</text>\n";

  // weights at one bidegree sit side by side
  std::map<std::pair<i64, i64>, std::map<int, i64>> spots;
  for (const auto& [c, d] : dims)
    if (d > 0) spots[{c.s, c.n - c.s}][st.weights ? c.w : 0] += d;
  for (const auto& [key, merged] : spots) {
    int k = 0;
    const int m = int(merged.size());
    for (auto [w, d] : merged) {
      const i64 cx = X(key.first) + (2 * k - (m - 1)) * 3, cy = Y(key.second);
      o << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"2.5\" fill=\"" << detail::weight_color(w)
        << "\"/>\n";
      o << "<text x=\"" << cx + 3 << "\" y=\"" << cy - 3 << "\">" << d << "</text>\n";
      ++k;
    }
  }

  if (next && r > 0) {
    auto lost = [&](const Cell& c) {
      auto a = dims.find(c);
      auto b = after.find(c);
      return a != dims.end() && a->second > (b == after.end() ? 0 : b->second);
    };
    for (const auto& [c, d] : dims) {
      Cell tgt{c.s - r, c.n - 1, c.w};
      if (!lost(c) || !lost(tgt)) continue;
      o << "<line x1=\"" << X(c.s) << "\" y1=\"" << Y(c.n - c.s) << "\" x2=\"" << X(tgt.s) << "\" y2=\""
        << Y(tgt.n - tgt.s) << "\" stroke=\"#555\" stroke-width=\"0.7\" marker-end=\"url(#h)\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace ssr
