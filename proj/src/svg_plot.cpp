#include "rcfpi/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rcfpi {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    double t;
    if (log) {
      t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    return pix_lo + t * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) out.push_back(v);
      }
    } else {
      const double span = hi - lo;
      const double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
      double v = std::ceil(lo / step) * step;
      for (; v <= hi + 1e-12 * span; v += step)
        if (out.size() < 12) out.push_back(v);
    }
    return out;
  }
};

}  // namespace

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgPlotOptions& opts) {
  const double ml = 70, mr = 20, mt = 36, mb = 52;
  const double px0 = ml, px1 = opts.width - mr;
  const double py0 = opts.height - mb, py1 = mt;  // y grows upward

  Axis ax{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          opts.log_x};
  Axis ay{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          opts.log_y};
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opts.log_x && s.x[i] <= 0.0) continue;
      if (opts.log_y && s.y[i] <= 0.0) continue;
      ax.lo = std::min(ax.lo, s.x[i]);
      ax.hi = std::max(ax.hi, s.x[i]);
      ay.lo = std::min(ay.lo, s.y[i]);
      ay.hi = std::max(ay.hi, s.y[i]);
    }
  if (!(ax.lo < ax.hi)) {
    ax.lo = ax.lo > 0 ? ax.lo * 0.5 : 0.0;
    ax.hi = ax.hi > 0 ? ax.hi * 2.0 : 1.0;
  }
  if (!(ay.lo < ay.hi)) {
    ay.lo = ay.lo > 0 ? ay.lo * 0.5 : 0.0;
    ay.hi = ay.hi > 0 ? ay.hi * 2.0 : 1.0;
  }
  if (!opts.log_y) {
    const double pad = 0.06 * (ay.hi - ay.lo);
    ay.lo -= pad;
    ay.hi += pad;
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (opts.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << opts.title << "</text>\n";

  for (double t : ax.ticks()) {
    const double x = ax.map(t, px0, px1);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(py0) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(py1) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(py0 + 16) << "\" text-anchor=\"middle\">"
        << num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = ay.map(t, py0, py1);
    svg << "<line x1=\"" << num(px0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(px1)
        << "\" y2=\"" << num(y) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << num(px0 - 6) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  svg << "<rect x=\"" << num(px0) << "\" y=\"" << num(py1) << "\" width=\"" << num(px1 - px0)
      << "\" height=\"" << num(py0 - py1) << "\" fill=\"none\" stroke=\"#404040\"/>\n";
  svg << "<text x=\"" << ((px0 + px1) / 2) << "\" y=\"" << (opts.height - 10)
      << "\" text-anchor=\"middle\">" << opts.x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << ((py0 + py1) / 2) << "\" text-anchor=\"middle\" transform=\""
      << "rotate(-90 16 " << ((py0 + py1) / 2) << ")\">" << opts.y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 6];
    std::ostringstream pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double xv = series[s].x[i], yv = series[s].y[i];
      if ((opts.log_x && xv <= 0.0) || (opts.log_y && yv <= 0.0)) continue;
      pts << num(ax.map(xv, px0, px1)) << ',' << num(ay.map(yv, py0, py1)) << ' ';
    }
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << num(px1 - 8) << "\" y=\"" << num(py1 + 16 + 16 * (double)s)
        << "\" text-anchor=\"end\" fill=\"" << color << "\">" << series[s].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rcfpi
