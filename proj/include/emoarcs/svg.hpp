#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "emoarcs/arcs.hpp"
#include "emoarcs/core.hpp"

namespace emoarcs {

struct ChartSeries {
  std::string label;
  EmotionArc arc;
};

struct ChartOptions {
  int width = 960;
  int height = 420;
  std::string title;
  std::string x_label = "position";
  std::string y_label = "value";
};

namespace detail {

inline double nice_step(double range, int target_ticks) {
  const double raw = range / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

/// Standalone SVG line chart of one or more arcs: axes with ticks, one
/// polyline per arc (broken at missing points), and a legend. No external
/// assets or libraries.
inline std::string render_arc_chart(std::span<const ChartSeries> series,
                                    const ChartOptions& opts = {}) {
  if (series.empty()) throw Error("plot: no arcs to draw");
  static const char* kPalette[] = {"#caa02c", "#2c9a3f", "#3558a8",
                                   "#b3382f", "#7b4fa6", "#2c8c8c"};
  constexpr int kPaletteSize = 6;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& p : s.arc.points) {
      xmin = std::min(xmin, static_cast<double>(p.position));
      xmax = std::max(xmax, static_cast<double>(p.position));
      if (p.value) {
        ymin = std::min(ymin, *p.value);
        ymax = std::max(ymax, *p.value);
      }
    }
  }
  if (!(xmin <= xmax) || !(ymin <= ymax))
    throw Error("plot: arcs contain no drawable points");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double ml = 64, mr = 24, mt = opts.title.empty() ? 24 : 44, mb = 48;
  const double pw = opts.width - ml - mr;
  const double ph = opts.height - mt - mb;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    svg << "<text x=\"" << opts.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << detail::xml_escape(opts.title)
        << "</text>\n";

  // gridlines and ticks
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  const double xstep = detail::nice_step(xmax - xmin, 8);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep) {
    svg << "<line x1=\"" << sx(x) << "\" y1=\"" << mt << "\" x2=\"" << sx(x) << "\" y2=\""
        << mt + ph << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << sx(x) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\">" << format_double(x) << "</text>\n";
  }
  const double ystep = detail::nice_step(ymax - ymin, 6);
  for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9; y += ystep) {
    svg << "<line x1=\"" << ml << "\" y1=\"" << sy(y) << "\" x2=\"" << ml + pw << "\" y2=\""
        << sy(y) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(y) + 4
        << "\" text-anchor=\"end\">" << format_double(y) << "</text>\n";
  }
  svg << "</g>\n";

  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opts.height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << detail::xml_escape(opts.x_label) << "</text>\n";
  svg << "<text x=\"14\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">"
      << detail::xml_escape(opts.y_label) << "</text>\n";

  // one path per arc, broken at missing points
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    std::ostringstream d;
    bool pen_down = false;
    for (const auto& p : series[s].arc.points) {
      if (!p.value) {
        pen_down = false;
        continue;
      }
      d << (pen_down ? 'L' : 'M') << sx(static_cast<double>(p.position)) << ' '
        << sy(*p.value) << ' ';
      pen_down = true;
    }
    svg << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
  }

  // legend
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = mt + 14 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 126
        << "\" y2=\"" << ly << "\" stroke=\"" << kPalette[s % kPaletteSize]
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << ml + pw - 120 << "\" y=\"" << ly + 4 << "\">"
        << detail::xml_escape(series[s].label) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace emoarcs
